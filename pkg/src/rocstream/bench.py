"""Sliding-window timing of the dynamic structures against a from-scratch recompute.

Run ``python3 -m rocstream.bench --help`` for options.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import time
from typing import Iterator, Optional

from .core import DataPoint, Label
from .evaluate import Evaluator, SortedBaseline
from .hmeasure import BetaParams

__all__ = ["synthetic_stream", "run_benchmark", "scaling"]


def synthetic_stream(seed: int = 0, p1: float = 0.5, shift: float = 1.0,
                     decimals: int = 3) -> Iterator[DataPoint]:
    """Endless stream of Gaussian scores; class 2 is shifted up by ``shift``.

    Rounding to ``decimals`` places produces plenty of tied scores.
    """
    rng = random.Random(seed)
    while True:
        label = Label.CLASS1 if rng.random() < p1 else Label.CLASS2
        mu = 0.0 if label == Label.CLASS1 else shift
        yield DataPoint(round(rng.gauss(mu, 1.0), decimals) + 0.0, label)


def _prefill(window: int, seed: int):
    stream = synthetic_stream(seed)
    head = [next(stream) for _ in range(window)]
    return head, stream


class _Slider:
    """A prefilled dynamic window that can be advanced a few steps at a time."""

    def __init__(self, metric: str, head, tail, params: BetaParams):
        self.ev = Evaluator((metric,), params)
        for p in head:
            self.ev.add(p)
        self.read = self.ev.auc if metric == "auc" else self.ev.h_exact
        self.window = list(head) + list(tail)
        self.start = 0
        self.pos = len(head)

    def advance(self, k: int) -> float:
        ev, window, read = self.ev, self.window, self.read
        clock = time.perf_counter
        t0 = clock()
        for _ in range(k):
            ev.add(window[self.pos])
            ev.delete(window[self.start])
            self.pos += 1
            self.start += 1
            read()
        return clock() - t0


def _time_dynamic(metric: str, head, tail, params: BetaParams) -> float:
    return _Slider(metric, head, tail, params).advance(len(tail))


def _time_baseline(metric: str, head, tail, params: BetaParams) -> float:
    base = SortedBaseline()
    for p in head:
        base.add(p)
    window = list(head)
    start = 0
    clock = time.perf_counter
    t0 = clock()
    for p in tail:
        base.add(p)
        base.remove(window[start])
        start += 1
        if metric == "auc":
            base.auc()
        else:
            base.h(None, params)
    return clock() - t0


def run_benchmark(window: int = 20_000, steps: int = 10_000, metrics=("auc", "h"),
                  seed: int = 0, params: Optional[BetaParams] = None,
                  baseline: bool = True) -> dict:
    """Total seconds for ``steps`` slide-and-read steps, per metric and engine."""
    params = params if params is not None else BetaParams()
    head, stream = _prefill(window, seed)
    tail = [next(stream) for _ in range(steps)]
    result = {"window": window, "steps": steps}
    for m in metrics:
        row = {"dynamic_s": _time_dynamic(m, head, tail, params)}
        if baseline:
            row["baseline_s"] = _time_baseline(m, head, tail, params)
            row["speedup"] = row["baseline_s"] / row["dynamic_s"]
        row["mean_update_us"] = 1e6 * row["dynamic_s"] / steps
        result[m] = row
    return result


def scaling(windows=(5_000, 10_000, 20_000, 40_000), steps: int = 3_000,
            metrics=("auc", "h"), seed: int = 0, block: int = 100) -> dict:
    """Per-update dynamic time per window size, and the ratio per doubling.

    All windows are prefilled first and then advanced ``block`` steps at a time
    in round-robin order, so a slow spell on the machine hits every window
    alike.  A window's per-update time is the median of its block means.
    """
    params = BetaParams()
    out = {}
    for m in metrics:
        sliders = []
        for w in windows:
            head, stream = _prefill(w, seed)
            sliders.append(_Slider(m, head, [next(stream) for _ in range(steps)], params))
        times = [[] for _ in windows]
        for _ in range(steps // block):
            for t, sl in zip(times, sliders):
                t.append(sl.advance(block))
        out[m] = [1e6 * statistics.median(t) / block for t in times]
    ratios = {m: [b / a for a, b in zip(v, v[1:])] for m, v in out.items()}
    return {"windows": list(windows), "update_us": out, "ratios": ratios}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python3 -m rocstream.bench", description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=20_000)
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--metrics", default="auc,h")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scaling", action="store_true", help="also time windows 5k, 10k, 20k, 40k")
    args = ap.parse_args(argv)
    metrics = tuple(m for m in args.metrics.split(",") if m)
    print(json.dumps(run_benchmark(args.window, args.steps, metrics, args.seed), indent=2))
    if args.scaling:
        print(json.dumps(scaling(metrics=metrics, seed=args.seed), indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
