"""Shared value types and exceptions."""

from __future__ import annotations

import enum
import math
from typing import NamedTuple


class RocStreamError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteScore(RocStreamError, ValueError):
    pass


class ScoreNotFound(RocStreamError, KeyError):
    pass


class InsufficientWeight(RocStreamError, ValueError):
    pass


class DegenerateHull(RocStreamError, ValueError):
    pass


class NoAccumulatorRegistered(RocStreamError, RuntimeError):
    pass


class DomainError(RocStreamError, ValueError):
    pass


class ZeroDifference(DomainError):
    pass


class NonConvexInput(DomainError):
    pass


class Label(enum.IntEnum):
    CLASS1 = 1
    CLASS2 = 2


class CountPair(NamedTuple):
    """Label counts ``(c1, c2)``; addition and subtraction are component-wise."""

    c1: int = 0
    c2: int = 0

    def __add__(self, other):  # type: ignore[override]
        return CountPair(self.c1 + other[0], self.c2 + other[1])

    def __sub__(self, other):
        c1 = self.c1 - other[0]
        c2 = self.c2 - other[1]
        if c1 < 0 or c2 < 0:
            raise InsufficientWeight(f"cannot subtract {tuple(other)} from {tuple(self)}")
        return CountPair(c1, c2)

    def is_zero(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    @classmethod
    def of(cls, label: Label | int) -> "CountPair":
        """Unit weight of a single point with the given label."""
        if label == Label.CLASS1:
            return cls(1, 0)
        if label == Label.CLASS2:
            return cls(0, 1)
        raise ValueError(f"unknown label {label!r}")


class DataPoint(NamedTuple):
    score: float
    label: Label

    @property
    def weight(self) -> CountPair:
        return CountPair.of(self.label)


def check_score(score: float) -> float:
    """Return ``score`` as a float with -0.0 folded into +0.0; reject NaN/inf."""
    score = float(score)
    if not math.isfinite(score):
        raise NonFiniteScore(f"score must be finite, got {score!r}")
    return score + 0.0


def check_weight(w) -> tuple[int, int]:
    w1, w2 = int(w[0]), int(w[1])
    if w1 < 0 or w2 < 0:
        raise ValueError(f"weights must be non-negative, got {(w1, w2)}")
    if w1 == 0 and w2 == 0:
        raise ValueError("weight (0, 0) is not allowed")
    return w1, w2
