"""H-measure on top of the dynamic ROC hull.

Two regimes:

* empirical priors (``pi_k = n_k / n``): every hull vertex contributes a term
  that depends only on its own coordinate difference, so the loss is the
  root-sum of a per-vertex scalar maintained by :class:`RocHullIndex`;
* external priors: a small subset of hull vertices is extracted and the loss
  is recomputed from it, giving a relative error of at most ``eps * (1 - H)``.

The cost-ratio weight is a Beta(alpha, beta) density; all integrals reduce to
non-regularised incomplete beta functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import DomainError, NoAccumulatorRegistered, NonConvexInput, ZeroDifference
from .hull import RocHullIndex

__all__ = [
    "BetaParams",
    "Priors",
    "HullPolyline",
    "NodeH",
    "incomplete_beta",
    "node_h",
    "exact_h",
    "l_max",
    "subset",
    "h_from_polyline",
    "approx_h",
]

_CF_TOL = 1e-14
_CF_MAX_ITER = 300
_TINY = 1e-300


@dataclass(frozen=True)
class BetaParams:
    alpha: float = 2.0
    beta: float = 2.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class Priors:
    pi1: float
    pi2: float

    def __post_init__(self):
        if not (0.0 < self.pi1 < 1.0 and 0.0 < self.pi2 < 1.0):
            raise DomainError(f"priors must lie in (0, 1), got {(self.pi1, self.pi2)}")
        if abs(self.pi1 + self.pi2 - 1.0) > 1e-12:
            raise DomainError(f"priors must sum to 1, got {(self.pi1, self.pi2)}")

    @classmethod
    def empirical(cls, n1: int, n2: int) -> "Priors":
        n = n1 + n2
        return cls(n1 / n, n2 / n)


@dataclass(frozen=True)
class HullPolyline:
    """Hull vertices in absolute counts together with the class totals."""

    points: Sequence[tuple[int, int]]
    totals: tuple[int, int]


# -- incomplete beta ---------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


@lru_cache(maxsize=256)
def complete_beta(a: float, b: float) -> float:
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Non-regularised incomplete beta ``B(x; a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt``."""
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"a and b must be positive, got {(a, b)}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    full = complete_beta(a, b)
    if x == 1.0:
        return full
    if x < (a + 1.0) / (a + b + 2.0):
        front = math.exp(a * math.log(x) + b * math.log1p(-x))
        return front * _betacf(a, b, x) / a
    front = math.exp(a * math.log(x) + b * math.log1p(-x))
    return full - front * _betacf(b, a, 1.0 - x) / b


# -- exact H via per-vertex terms -----------------------------------------------


def node_h(d, params: BetaParams) -> float:
    """Loss contribution of one hull edge with coordinate difference ``d``."""
    d1, d2 = d
    if d1 == 0 and d2 == 0:
        raise ZeroDifference("coordinate difference (0, 0)")
    a, b = params.alpha, params.beta
    c = d2 / (d1 + d2)
    return d1 * incomplete_beta(c, a + 1, b) + d2 * (
        complete_beta(a, b + 1) - incomplete_beta(c, a, b + 1)
    )


class NodeH:
    """Cached :func:`node_h` for fixed parameters, usable as a hull vertex function.

    The term is homogeneous of degree one in ``d``, so the cache is keyed by
    the reduced direction of ``d``.
    """

    def __init__(self, params: Optional[BetaParams] = None, cache_size: int = 1 << 16):
        self.params = params if params is not None else BetaParams()
        self._unit = lru_cache(maxsize=cache_size)(self._unit_term)

    def _unit_term(self, d1: int, d2: int) -> float:
        return node_h((d1, d2), self.params)

    def __call__(self, d1: int, d2: int) -> float:
        g = math.gcd(d1, d2)
        if g == 1:
            return self._unit(d1, d2)
        return g * self._unit(d1 // g, d2 // g)


def l_max(priors: Priors, params: BetaParams) -> float:
    """Loss of the diagonal (uninformative) hull under ``priors``."""
    if not isinstance(priors, Priors):
        raise DomainError("priors must be a Priors instance")
    a, b = params.alpha, params.beta
    p1, p2 = priors.pi1, priors.pi2
    num = p1 * incomplete_beta(p2, a + 1, b) + p2 * (
        complete_beta(a, b + 1) - incomplete_beta(p2, a, b + 1)
    )
    return num / complete_beta(a, b)


def exact_h(hull: RocHullIndex, params: Optional[BetaParams] = None) -> Optional[float]:
    """H-measure with empirical priors, read from the hull's accumulated terms."""
    fn = hull.accumulator
    if fn is None:
        raise NoAccumulatorRegistered("register NodeH(params) on the hull first")
    if params is None:
        params = getattr(fn, "params", None) or BetaParams()
    if not isinstance(fn, NodeH) or fn.params != params:
        raise DomainError("hull accumulator does not match the requested beta parameters")
    n1, n2 = hull.totals
    if n1 == 0 or n2 == 0:
        return None
    n = n1 + n2
    loss = hull.root_accumulator() / (n * complete_beta(params.alpha, params.beta))
    return 1.0 - loss / l_max(Priors(n1 / n, n2 / n), params)


# -- approximate H for external priors ------------------------------------------


def subset(hull: RocHullIndex, eps: float) -> HullPolyline:
    """Hull vertices sufficient for an ``eps``-approximation of both loss terms.

    A subtree is skipped when the second coordinate grows by at most a factor
    ``1 + eps`` across it and the distance of the first coordinate to ``n1``
    shrinks by at most that factor.  Reported vertices come out in order.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    root = hull.hull_root
    if root is None:
        return HullPolyline([(0, 0)], (0, 0))
    n1, n2 = root.c1, root.c2
    f = 1.0 + eps
    out = [(0, 0)]
    # explicit stack of (node, p, q) with p/q the bounding vertices; a bare
    # vertex tuple on the stack means "emit"
    stack = [(root, 0, 0, n1, n2)]
    while stack:
        item = stack.pop()
        if len(item) == 2:
            out.append(item)
            continue
        u, p1, p2, q1, q2 = item
        if u is None:
            continue
        if q2 > f * p2 or (n1 - p1) > f * (n1 - q1):
            l = u.l
            z1 = p1 + u.w1
            z2 = p2 + u.w2
            if l is not None:
                z1 += l.c1
                z2 += l.c2
            stack.append((u.r, z1, z2, q1, q2))
            stack.append((z1, z2))
            stack.append((l, p1, p2, z1, z2))
    if out[-1] != (n1, n2):
        out.append((n1, n2))
    return HullPolyline(out, (n1, n2))


def h_from_polyline(
    poly: HullPolyline, priors: Priors, params: Optional[BetaParams] = None
) -> Optional[float]:
    """H-measure of a concave ROC polyline under arbitrary priors.

    The optimal threshold sits at vertex ``i`` for cost ratios between the
    slope-derived breakpoints ``c_i`` and ``c_{i+1}``, so the loss integral is
    a sum of incomplete beta differences over those intervals.
    """
    params = params if params is not None else BetaParams()
    n1, n2 = poly.totals
    if n1 == 0 or n2 == 0:
        return None
    pts = []
    for p in poly.points:
        p = (p[0], p[1])
        if not pts or p != pts[-1]:
            pts.append(p)
    if pts[0] != (0, 0):
        raise NonConvexInput("polyline must start at (0, 0)")
    for (a1, a2), (b1, b2), (c1, c2) in zip(pts, pts[1:], pts[2:]):
        d1, d2, e1, e2 = b1 - a1, b2 - a2, c1 - b1, c2 - b2
        if min(d1, d2, e1, e2) < 0 or d1 * e2 < e1 * d2:
            raise NonConvexInput("polyline slopes must be non-increasing")

    a, b = params.alpha, params.beta
    p1, p2 = priors.pi1, priors.pi2
    ys = [(r1 / n1, r2 / n2) for r1, r2 in pts]
    cs = [0.0]
    for (y01, y02), (y11, y12) in zip(ys, ys[1:]):
        num = p2 * (y12 - y02)
        cs.append(num / (num + p1 * (y11 - y01)))
    cs.append(1.0)

    ba1 = [incomplete_beta(c, a + 1, b) for c in cs]
    bb1 = [incomplete_beta(c, a, b + 1) for c in cs]
    loss = 0.0
    for i, (y1, y2) in enumerate(ys):
        loss += p1 * (1.0 - y1) * (ba1[i + 1] - ba1[i]) + p2 * y2 * (bb1[i + 1] - bb1[i])
    loss /= complete_beta(a, b)
    return 1.0 - loss / l_max(priors, params)


def approx_h(
    hull: RocHullIndex, priors: Priors, params: Optional[BetaParams] = None, eps: float = 0.1
) -> Optional[float]:
    """``eps``-approximate H-measure for priors not estimated from the data.

    The result never exceeds the exact value and is within ``eps * (1 - H)`` of it.
    """
    return h_from_polyline(subset(hull, eps), priors, params)
