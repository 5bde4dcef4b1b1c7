"""Prequential and sliding-window evaluation over a stream of scored points."""

from __future__ import annotations

import bisect
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .auc import AucMaintainer
from .core import DataPoint, Label, RocStreamError
from .hmeasure import BetaParams, NodeH, Priors, approx_h, exact_h
from .hull import RocHullIndex
from .oracles import doubled_u_from_groups, h_from_roc, roc_from_groups

__all__ = [
    "ConfigError",
    "BaselineMismatch",
    "RunConfig",
    "MetricReport",
    "SortedBaseline",
    "Evaluator",
    "run",
]

METRICS = ("auc", "h", "happrox")
ALIASES = {"h_exact": "h", "h_approx": "happrox"}
H_REL_TOL = 1e-9
# H lives in [0, 1]; the floor only matters when H is (numerically) zero
H_ABS_FLOOR = 1e-12
APPROX_ABS_SLACK = 1e-9
APPROX_DIRECTION_SLACK = 1e-12


class ConfigError(RocStreamError, ValueError):
    pass


class BaselineMismatch(RocStreamError, AssertionError):
    pass


@dataclass
class RunConfig:
    mode: str = "cumulative"
    window: Optional[int] = None
    metrics: tuple = ("auc",)
    epsilon: float = 0.1
    alpha: float = 2.0
    beta: float = 2.0
    # None means empirical priors
    priors: Optional[tuple] = None
    report_every: int = 1
    baseline: bool = False

    def __post_init__(self):
        if self.mode not in ("cumulative", "sliding"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "sliding":
            if self.window is None or int(self.window) != self.window or self.window < 2:
                raise ConfigError("sliding mode needs an integer window >= 2")
        metrics = []
        for m in self.metrics:
            m = ALIASES.get(m, m)
            if m not in METRICS:
                raise ConfigError(f"unknown metric {m!r}; choose from {', '.join(METRICS)}")
            if m == "h" and self.priors is not None:
                # exact H is only defined for empirical priors
                m = "happrox"
            if m not in metrics:
                metrics.append(m)
        if not metrics:
            raise ConfigError("no metrics requested")
        self.metrics = tuple(metrics)
        if not (isinstance(self.report_every, int) and self.report_every >= 1):
            raise ConfigError("report_every must be a positive integer")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ConfigError("epsilon must be positive")
        try:
            self.params = BetaParams(self.alpha, self.beta)
            self.fixed_priors = Priors(*self.priors) if self.priors is not None else None
        except RocStreamError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass
class MetricReport:
    step: int
    n: int
    n1: int
    n2: int
    auc: Optional[float] = None
    h_exact: Optional[float] = None
    h_approx: Optional[float] = None
    update_micros: int = 0
    baseline_micros: Optional[int] = None

    FIELDS = (
        "step",
        "n",
        "n1",
        "n2",
        "auc",
        "h_exact",
        "h_approx",
        "update_micros",
        "baseline_micros",
    )

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.FIELDS}


class SortedBaseline:
    """Recompute-from-scratch reference over a window kept as a sorted list."""

    def __init__(self):
        self.scores: list[float] = []
        self.labels: list[int] = []
        self.n1 = 0
        self.n2 = 0

    def add(self, p: DataPoint) -> None:
        i = bisect.bisect_right(self.scores, p.score)
        self.scores.insert(i, p.score)
        self.labels.insert(i, int(p.label))
        if p.label == Label.CLASS1:
            self.n1 += 1
        else:
            self.n2 += 1

    def remove(self, p: DataPoint) -> None:
        lo = bisect.bisect_left(self.scores, p.score)
        hi = bisect.bisect_right(self.scores, p.score, lo)
        label = int(p.label)
        for i in range(lo, hi):
            if self.labels[i] == label:
                del self.scores[i]
                del self.labels[i]
                if label == 1:
                    self.n1 -= 1
                else:
                    self.n2 -= 1
                return
        raise KeyError(p)

    def groups(self) -> list[tuple[float, int, int]]:
        out = []
        prev = None
        w1 = w2 = 0
        for s, l in zip(self.scores, self.labels):
            if s != prev:
                if prev is not None:
                    out.append((prev, w1, w2))
                prev = s
                w1 = w2 = 0
            if l == 1:
                w1 += 1
            else:
                w2 += 1
        if prev is not None:
            out.append((prev, w1, w2))
        return out

    def doubled_u(self) -> int:
        return doubled_u_from_groups(self.groups())

    def auc(self) -> Optional[float]:
        if self.n1 == 0 or self.n2 == 0:
            return None
        return self.doubled_u() / (2 * self.n1 * self.n2)

    def h(self, priors: Optional[Priors], params: BetaParams) -> Optional[float]:
        return h_from_roc(roc_from_groups(self.groups()), priors, params)


class Evaluator:
    """The dynamic structures needed for a set of metrics, updated in lockstep."""

    def __init__(self, metrics=("auc",), params: Optional[BetaParams] = None,
                 priors: Optional[Priors] = None, epsilon: float = 0.1):
        self.metrics = tuple(metrics)
        self.params = params if params is not None else BetaParams()
        self.priors = priors
        self.epsilon = epsilon
        self.auc_state = AucMaintainer() if "auc" in self.metrics else None
        need_hull = "h" in self.metrics or "happrox" in self.metrics
        self.hull = RocHullIndex(NodeH(self.params) if "h" in self.metrics else None) if need_hull else None
        self.n1 = 0
        self.n2 = 0

    def add(self, p: DataPoint) -> None:
        w = p.weight
        if self.auc_state is not None:
            self.auc_state.add(p.score, w)
        if self.hull is not None:
            self.hull.insert(p.score, w)
        self.n1 += w[0]
        self.n2 += w[1]

    def delete(self, p: DataPoint) -> None:
        w = p.weight
        if self.auc_state is not None:
            self.auc_state.delete(p.score, w)
        if self.hull is not None:
            self.hull.remove(p.score, w)
        self.n1 -= w[0]
        self.n2 -= w[1]

    def auc(self) -> Optional[float]:
        return self.auc_state.auc()

    def h_exact(self) -> Optional[float]:
        return exact_h(self.hull, self.params)

    def current_priors(self) -> Optional[Priors]:
        if self.priors is not None:
            return self.priors
        if self.n1 == 0 or self.n2 == 0:
            return None
        return Priors.empirical(self.n1, self.n2)

    def h_approx(self) -> Optional[float]:
        priors = self.current_priors()
        if priors is None:
            return None
        return approx_h(self.hull, priors, self.params, self.epsilon)

    def report(self, step: int) -> MetricReport:
        rep = MetricReport(step, self.n1 + self.n2, self.n1, self.n2)
        if "auc" in self.metrics:
            rep.auc = self.auc()
        if "h" in self.metrics:
            rep.h_exact = self.h_exact()
        if "happrox" in self.metrics:
            rep.h_approx = self.h_approx()
        return rep


def _check_against_baseline(ev: Evaluator, base: SortedBaseline, rep: MetricReport) -> None:
    if ev.auc_state is not None:
        expected = base.doubled_u()
        if ev.auc_state.doubled_u != expected:
            raise BaselineMismatch(
                f"step {rep.step}: 2U = {ev.auc_state.doubled_u}, baseline {expected}"
            )
    if "h" in ev.metrics:
        expected = base.h(None, ev.params)
        if not _same(rep.h_exact, expected, H_REL_TOL):
            raise BaselineMismatch(f"step {rep.step}: H = {rep.h_exact}, baseline {expected}")
    if "happrox" in ev.metrics:
        priors = ev.current_priors()
        exact = base.h(priors, ev.params) if priors is not None else None
        got = rep.h_approx
        if (got is None) != (exact is None):
            raise BaselineMismatch(f"step {rep.step}: approximate H {got}, baseline {exact}")
        if got is not None:
            if abs(exact - got) > ev.epsilon * (1 - exact) + APPROX_ABS_SLACK or (
                got > exact + APPROX_DIRECTION_SLACK
            ):
                raise BaselineMismatch(
                    f"step {rep.step}: approximate H {got} violates the bound around {exact}"
                )


def _same(a, b, rel):
    if a is None or b is None:
        return a is None and b is None
    return math.isclose(a, b, rel_tol=rel, abs_tol=H_ABS_FLOOR)


def run(config: RunConfig, points: Iterable[DataPoint]) -> Iterator[MetricReport]:
    """Feed ``points`` through the dynamic structures, yielding one report per interval."""
    ev = Evaluator(config.metrics, config.params, config.fixed_priors, config.epsilon)
    base = SortedBaseline() if config.baseline else None
    window: deque = deque()
    sliding = config.mode == "sliding"
    spent = 0
    spent_base = 0
    clock = time.perf_counter_ns
    for step, p in enumerate(points, 1):
        t0 = clock()
        ev.add(p)
        if sliding:
            window.append(p)
            if len(window) > config.window:
                old = window.popleft()
                ev.delete(old)
            else:
                old = None
        reporting = step % config.report_every == 0
        rep = ev.report(step) if reporting else None
        spent += clock() - t0

        if base is not None:
            t0 = clock()
            base.add(p)
            if sliding and old is not None:
                base.remove(old)
            spent_base += clock() - t0

        if not reporting:
            continue
        rep.update_micros = round(spent / 1000)
        if base is not None:
            t0 = clock()
            _check_against_baseline(ev, base, rep)
            spent_base += clock() - t0
            rep.baseline_micros = round(spent_base / 1000)
        spent = spent_base = 0
        yield rep
