"""Command-line front end: stream a score/label CSV through the evaluator."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Iterator, Optional, TextIO

from .core import DataPoint, Label
from .evaluate import BaselineMismatch, ConfigError, MetricReport, RunConfig, run

__all__ = ["ParseError", "parse_line", "read_points", "main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_MISMATCH = 4

DEFAULT_LABELS = {"1": Label.CLASS1, "2": Label.CLASS2}


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


def parse_line(text: str, labels=None, line: Optional[int] = None) -> DataPoint:
    """Parse ``"score,label"`` into a :class:`DataPoint`."""
    labels = DEFAULT_LABELS if labels is None else labels
    parts = text.strip().split(",")
    if len(parts) != 2:
        raise ParseError(f"expected 'score,label', got {text.strip()!r}", line, "line")
    raw_score, raw_label = parts[0].strip(), parts[1].strip()
    try:
        score = float(raw_score)
    except ValueError:
        raise ParseError(f"malformed score {raw_score!r}", line, "score") from None
    if not math.isfinite(score):
        raise ParseError(f"non-finite score {raw_score!r}", line, "score")
    if raw_label not in labels:
        raise ParseError(f"unknown label {raw_label!r}", line, "label")
    return DataPoint(score + 0.0, labels[raw_label])


def parse_label_map(text: str) -> dict:
    """``"1=pos,2=neg"`` maps class 1 to token ``pos`` and class 2 to ``neg``."""
    out = {}
    for item in text.split(","):
        cls, sep, token = item.partition("=")
        cls, token = cls.strip(), token.strip()
        if not sep or cls not in ("1", "2") or not token:
            raise ConfigError(f"bad --label-map entry {item!r}; expected 1=TOKEN,2=TOKEN")
        if token in out:
            raise ConfigError(f"label token {token!r} mapped twice")
        out[token] = Label(int(cls))
    if set(out.values()) != {Label.CLASS1, Label.CLASS2}:
        raise ConfigError("--label-map must name a token for both classes")
    return out


def parse_priors(text: str) -> Optional[tuple]:
    if text == "empirical":
        return None
    try:
        p1, p2 = (float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"--priors must be 'empirical' or 'P1,P2', got {text!r}") from None
    return (p1, p2)


def read_points(stream: TextIO, labels=None, has_header: bool = False) -> Iterator[DataPoint]:
    for lineno, text in enumerate(stream, 1):
        if has_header and lineno == 1:
            continue
        if not text.strip():
            continue
        yield parse_line(text, labels, lineno)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


class _Writer:
    def __init__(self, out: TextIO, fmt: str):
        self.out = out
        self.fmt = fmt
        if fmt == "csv":
            self.csv = csv.writer(out, lineterminator="\n")
            self.csv.writerow(MetricReport.FIELDS)

    def write(self, rep: MetricReport) -> None:
        if self.fmt == "csv":
            self.csv.writerow([_cell(getattr(rep, f)) for f in MetricReport.FIELDS])
        else:
            self.out.write(json.dumps(rep.as_dict()) + "\n")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="rocstream",
        description="Streaming AUC and H-measure over a score/label CSV.",
    )
    ap.add_argument("input", help="CSV of 'score,label' lines, or '-' for standard input")
    ap.add_argument("--mode", choices=("cumulative", "sliding"), default="cumulative")
    ap.add_argument("--window", type=int, default=None)
    ap.add_argument("--metrics", default="auc", help="comma list from auc,h,happrox")
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--priors", default="empirical", help="'empirical' or 'P1,P2'")
    ap.add_argument("--report-every", type=int, default=1)
    ap.add_argument("--baseline", action="store_true", help="cross-check against a from-scratch recompute")
    ap.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    ap.add_argument("--output", default=None, help="output path (default: standard output)")
    ap.add_argument("--has-header", action="store_true")
    ap.add_argument("--label-map", default=None, help="e.g. 1=pos,2=neg")
    return ap


def main(argv=None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        labels = parse_label_map(args.label_map) if args.label_map else None
        config = RunConfig(
            mode=args.mode,
            window=args.window,
            metrics=tuple(m.strip() for m in args.metrics.split(",") if m.strip()),
            epsilon=args.epsilon,
            alpha=args.alpha,
            beta=args.beta,
            priors=parse_priors(args.priors),
            report_every=args.report_every,
            baseline=args.baseline,
        )
    except (_UsageError, ConfigError) as exc:
        print(f"rocstream: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    src = out = None
    try:
        try:
            src = stdin if args.input == "-" else open(args.input, encoding="utf-8")
            out = stdout if args.output is None else open(args.output, "w", encoding="utf-8")
        except OSError as exc:
            print(f"rocstream: I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        writer = _Writer(out, args.format)
        try:
            for rep in run(config, read_points(src, labels, args.has_header)):
                writer.write(rep)
        except ParseError as exc:
            print(f"rocstream: parse error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except UnicodeDecodeError as exc:
            print(f"rocstream: parse error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except BaselineMismatch as exc:
            print(f"rocstream: baseline mismatch: {exc}", file=sys.stderr)
            return EXIT_MISMATCH
        except OSError as exc:
            print(f"rocstream: I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        out.flush()
    finally:
        if src is not None and src is not stdin:
            src.close()
        if out is not None and out is not stdout:
            out.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
