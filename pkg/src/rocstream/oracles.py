"""Brute-force reference computations.

Nothing here touches the dynamic trees; these functions exist so that the
incremental structures can be checked against something that is obviously
right, and so the CLI has a recompute-from-scratch baseline to time against.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Optional, Sequence

from .core import DataPoint, Label

__all__ = [
    "naive_doubled_u",
    "group_points",
    "doubled_u_from_groups",
    "roc_from_groups",
    "offline_auc",
    "offline_roc",
    "upper_hull",
    "offline_h",
    "h_from_roc",
]


def naive_doubled_u(points: Sequence[DataPoint]) -> int:
    """Twice the Mann-Whitney statistic by the O(n^2) pair loop."""
    s1 = [p.score for p in points if p.label == Label.CLASS1]
    s2 = [p.score for p in points if p.label == Label.CLASS2]
    total = 0
    for s in s1:
        for t in s2:
            if s < t:
                total += 2
            elif s == t:
                total += 1
    return total


def group_points(points: Iterable[DataPoint]) -> list[tuple[float, int, int]]:
    """``(score, w1, w2)`` per unique score, ascending."""
    groups = defaultdict(lambda: [0, 0])
    for p in points:
        groups[p.score + 0.0][0 if p.label == Label.CLASS1 else 1] += 1
    return [(s, w[0], w[1]) for s, w in sorted(groups.items())]


def doubled_u_from_groups(groups: Iterable[tuple[float, int, int]]) -> int:
    """Sorted sweep over unique scores, tracking the class-1 prefix count."""
    doubled = 0
    h = 0
    for _, w1, w2 in groups:
        doubled += w2 * (2 * h + w1)
        h += w1
    return doubled


def offline_auc(points: Iterable[DataPoint]) -> Optional[float]:
    groups = group_points(points)
    n1 = sum(g[1] for g in groups)
    n2 = sum(g[2] for g in groups)
    if n1 == 0 or n2 == 0:
        return None
    return doubled_u_from_groups(groups) / (2 * n1 * n2)


def roc_from_groups(groups: Iterable[tuple[float, int, int]]) -> list[tuple[int, int]]:
    roc = [(0, 0)]
    r1 = r2 = 0
    for _, w1, w2 in groups:
        r1 += w1
        r2 += w2
        roc.append((r1, r2))
    return roc


def offline_roc(points: Iterable[DataPoint]) -> list[tuple[int, int]]:
    """Non-normalised ROC points: (0, 0) then cumulative counts per unique score."""
    return roc_from_groups(group_points(points))


def upper_hull(roc: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone-chain upper hull of an ROC polyline.

    The first coordinate is treated as vertical.  Collinear interior points are
    dropped, so consecutive hull edges have strictly decreasing slopes.
    """
    hull: list[tuple[int, int]] = []
    for p in roc:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # slope(a->b) <= slope(b->p)  =>  b is not a strict upper-hull vertex
            if (b[0] - a[0]) * (p[1] - b[1]) <= (p[0] - b[0]) * (b[1] - a[1]):
                hull.pop()
            else:
                break
        if hull and hull[-1] == p:
            continue
        hull.append(p)
    return hull


def offline_h(points: Sequence[DataPoint], priors=None, params=None) -> Optional[float]:
    """H-measure from scratch: ROC, hull, then the closed-form loss sum.

    ``priors=None`` means empirical priors ``(n1/n, n2/n)``.
    """
    return h_from_roc(offline_roc(points), priors, params)


def h_from_roc(roc: Sequence[tuple[int, int]], priors=None, params=None) -> Optional[float]:
    from .hmeasure import BetaParams, HullPolyline, Priors, h_from_polyline

    params = params if params is not None else BetaParams()
    n1, n2 = roc[-1]
    if n1 == 0 or n2 == 0:
        return None
    if priors is None:
        priors = Priors(n1 / (n1 + n2), n2 / (n1 + n2))
    return h_from_polyline(HullPolyline(upper_hull(roc), (n1, n2)), priors, params)
