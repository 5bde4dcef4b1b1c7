"""Exact AUC under insertions and deletions.

The Mann-Whitney statistic is kept doubled (``2U``) so that every update is
integer arithmetic; the division happens only when the AUC is read out.
"""

from __future__ import annotations

from typing import Optional

from .core import CountPair, check_score, check_weight
from .score_index import ScoreIndex

__all__ = ["AucMaintainer"]


class AucMaintainer:
    def __init__(self):
        self.index = ScoreIndex()
        self.doubled_u = 0

    @property
    def totals(self) -> CountPair:
        return self.index.totals

    def add(self, score: float, w) -> None:
        """Add a batch of points sharing ``score`` with label counts ``w``."""
        score = check_score(score)
        w1, w2 = check_weight(w)
        u1, u2 = self.index.left_count(score)
        v1, v2 = self.index.weight_at(score)
        _, n2 = self.index.totals
        self.doubled_u += w2 * (2 * u1 + v1) + w1 * (2 * n2 - 2 * u2 - v2) + w1 * w2
        self.index.insert(score, (w1, w2))

    def delete(self, score: float, w) -> None:
        """Remove a batch of points sharing ``score``; the batch must be present."""
        score = check_score(score)
        w1, w2 = check_weight(w)
        # remove first so that missing or short batches fail before 2U is touched
        u1, u2 = self.index.left_count(score)
        v1, v2 = self.index.weight_at(score)
        _, n2 = self.index.totals
        self.index.remove(score, (w1, w2))
        self.doubled_u -= w2 * (2 * u1 + v1) + w1 * (2 * n2 - 2 * u2 - v2) - w1 * w2

    @property
    def u(self) -> float:
        return self.doubled_u / 2

    def auc(self) -> Optional[float]:
        """AUC of the current multiset, or None when either class is absent."""
        n1, n2 = self.index.totals
        if n1 == 0 or n2 == 0:
            return None
        return self.doubled_u / (2 * n1 * n2)
