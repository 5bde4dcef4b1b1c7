"""Dynamic upper convex hull of a non-normalised ROC curve.

Layout follows the classic Overmars-van Leeuwen scheme:

* an outer leaf-oriented AVL tree keyed by unique score, one leaf per ROC step;
* every inner node ``u`` of the outer tree knows how its hull was assembled from
  the hulls of its two children (the bridge position plus the two cut-off
  fragments), so the join can be undone;
* only the root keeps its full hull.  An update walks down the search path
  un-joining hulls, changes the leaf, and re-joins on the way back up.

Hulls are concatenable queues: AVL trees over hull vertices in left-to-right
order.  A vertex node stores its coordinate difference to the previous vertex
(``w1, w2``), subtree sums of those differences (``c1, c2``), and a per-vertex
scalar ``acc`` with subtree sum ``cacc``.  Absolute coordinates are never
stored; they are rebuilt from prefix sums while descending.

Coordinates are integer label counts.  The first count is the vertical axis.
All geometric predicates are integer cross products.
"""

from __future__ import annotations

from typing import Callable, Iterator, Optional

from .core import (
    CountPair,
    DegenerateHull,
    InsufficientWeight,
    NoAccumulatorRegistered,
    ScoreNotFound,
    check_score,
    check_weight,
)

__all__ = [
    "HullNode",
    "RocHullIndex",
    "bridge",
    "build_hull_tree",
    "join_hulls",
    "tree_vertices",
]

NodeFunction = Callable[[int, int], float]


class HullNode:
    __slots__ = ("l", "r", "ht", "sz", "w1", "w2", "c1", "c2", "acc", "cacc", "nxt")

    def __init__(self, w1: int, w2: int, acc: float = 0.0):
        self.l = None
        self.r = None
        self.ht = 1
        self.sz = 1
        self.w1 = w1
        self.w2 = w2
        self.c1 = w1
        self.c2 = w2
        self.acc = acc
        self.cacc = acc
        # in-order successor inside the same hull tree
        self.nxt = None

    def __repr__(self):
        return f"HullNode(w=({self.w1}, {self.w2}), size={self.sz})"


# -- concatenable queue primitives -------------------------------------------


def _pull(t):
    l, r = t.l, t.r
    if l is None:
        if r is None:
            t.ht = 1
            t.sz = 1
            t.c1 = t.w1
            t.c2 = t.w2
            t.cacc = t.acc
        else:
            t.ht = r.ht + 1
            t.sz = r.sz + 1
            t.c1 = t.w1 + r.c1
            t.c2 = t.w2 + r.c2
            t.cacc = t.acc + r.cacc
    elif r is None:
        t.ht = l.ht + 1
        t.sz = l.sz + 1
        t.c1 = l.c1 + t.w1
        t.c2 = l.c2 + t.w2
        t.cacc = l.cacc + t.acc
    else:
        t.ht = (l.ht if l.ht > r.ht else r.ht) + 1
        t.sz = l.sz + r.sz + 1
        t.c1 = l.c1 + t.w1 + r.c1
        t.c2 = l.c2 + t.w2 + r.c2
        t.cacc = l.cacc + t.acc + r.cacc


def _ht(t):
    return t.ht if t is not None else 0


def _sz(t):
    return t.sz if t is not None else 0


def _rot_right(x):
    y = x.l
    x.l = y.r
    y.r = x
    _pull(x)
    _pull(y)
    return y


def _rot_left(x):
    y = x.r
    x.r = y.l
    y.l = x
    _pull(x)
    _pull(y)
    return y


def _bal(t):
    _pull(t)
    d = _ht(t.l) - _ht(t.r)
    if d > 1:
        if _ht(t.l.l) < _ht(t.l.r):
            t.l = _rot_left(t.l)
        return _rot_right(t)
    if d < -1:
        if _ht(t.r.r) < _ht(t.r.l):
            t.r = _rot_right(t.r)
        return _rot_left(t)
    return t


def _join(a, m, b):
    """AVL join of ``a``, single node ``m``, ``b`` (all of a before m before b)."""
    ha = a.ht if a is not None else 0
    hb = b.ht if b is not None else 0
    if ha > hb + 1:
        a.r = _join(a.r, m, b)
        return _bal(a)
    if hb > ha + 1:
        b.l = _join(a, m, b.l)
        return _bal(b)
    m.l = a
    m.r = b
    _pull(m)
    return m


def _split(t, k):
    """Split by position: (first k nodes, node k, the rest)."""
    ls = t.l.sz if t.l is not None else 0
    if k < ls:
        a, m, b = _split(t.l, k)
        r = t.r
        t.l = t.r = None
        return a, m, _join(b, t, r)
    if k > ls:
        a, m, b = _split(t.r, k - ls - 1)
        l = t.l
        t.l = t.r = None
        return _join(l, t, a), m, b
    l, r = t.l, t.r
    t.l = t.r = None
    return l, t, r


def _first(t):
    while t.l is not None:
        t = t.l
    return t


def _last(t):
    while t.r is not None:
        t = t.r
    return t


def concat3(a, m, b):
    if a is not None:
        _last(a).nxt = m
    m.nxt = _first(b) if b is not None else None
    return _join(a, m, b)


def split3(t, k):
    a, m, b = _split(t, k)
    if a is not None:
        _last(a).nxt = None
    m.nxt = None
    return a, m, b


def concat2(a, b):
    if a is None:
        return b
    if b is None:
        return a
    _, m, rest = split3(b, 0)
    return concat3(a, m, rest)


def split2(t, k):
    """(first k nodes, the rest)."""
    if t is None or k >= t.sz:
        return t, None
    a, m, b = split3(t, k)
    return a, concat3(None, m, b)


# -- bridge search -----------------------------------------------------------


def bridge(H: HullNode, G: HullNode):
    """Locate the bridge between hull ``H`` and hull ``G`` placed right after it.

    ``G``'s origin is ``H``'s last vertex.  Returns ``(u, v, p, q)``: the joint
    hull keeps the first ``u`` vertices of ``H`` (``u = 0`` means only the
    origin), bridges from ``p`` to ``q``, and continues with vertex ``v``
    (1-based) of ``G`` onwards.  ``p`` and ``q`` are absolute coordinates.

    Both trees are descended simultaneously.  Under the shear
    ``(c1, c2) -> (c1 + c2, c1)`` the two point sets are strictly separated by
    the vertical line through the junction, which is what the last case of the
    case analysis needs.  Collinear vertices are resolved towards the shortest
    joint hull.
    """
    if H is None or G is None:
        raise DegenerateHull("bridge needs two non-empty hulls")
    x0 = H.c1 + H.c2

    x = H
    p1 = x.w1 + (x.l.c1 if x.l is not None else 0)
    p2 = x.w2 + (x.l.c2 if x.l is not None else 0)
    a = _sz(x.l) + 1
    at_origin = False
    first = None

    y = G
    q1 = H.c1 + y.w1 + (y.l.c1 if y.l is not None else 0)
    q2 = H.c2 + y.w2 + (y.l.c2 if y.l is not None else 0)
    c = _sz(y.l) + 1

    budget = H.ht + G.ht + 4
    while True:
        budget -= 1
        if budget < 0:
            raise RuntimeError("bridge search did not converge")
        s1 = q1 - p1
        s2 = q2 - p2
        if at_origin:
            nx = first
            lt_p = False
        else:
            nx = x.nxt
            # edge into p is no steeper than p->q: the bridge leaves H earlier
            lt_p = x.w1 * s2 - s1 * x.w2 <= 0
        rt_p = nx is not None and nx.w1 * s2 - s1 * nx.w2 > 0
        ny = y.nxt
        lt_q = y.w1 * s2 - s1 * y.w2 < 0
        rt_q = ny is not None and ny.w1 * s2 - s1 * ny.w2 >= 0

        if lt_p:
            move = "hl"
        elif rt_q:
            move = "gr"
        elif rt_p:
            if lt_q:
                # both candidates point inwards: compare where the edge out of
                # p and the edge into q intersect against the junction
                ex, ey = nx.w1 + nx.w2, nx.w1
                fx, fy = y.w1 + y.w2, y.w1
                d = ex * fy - ey * fx
                n = (s1 + s2) * fy - s1 * fx
                num = (p1 + p2 - x0) * d + n * ex
                left_of_junction = num <= 0 if d > 0 else num >= 0
                move = "hr" if left_of_junction else "gl"
            else:
                move = "hr"
        elif lt_q:
            move = "gl"
        else:
            return a, c, CountPair(p1, p2), CountPair(q1, q2)

        if move == "hl":
            l = x.l
            if l is None:
                if a != 1:
                    raise RuntimeError("bridge search left the candidate range")
                at_origin = True
                first = x
                p1 -= x.w1
                p2 -= x.w2
                a = 0
            else:
                p1 -= x.w1
                p2 -= x.w2
                lr = l.r
                if lr is not None:
                    p1 -= lr.c1
                    p2 -= lr.c2
                a -= 1 + _sz(lr)
                x = l
        elif move == "hr":
            r = None if at_origin else x.r
            if r is None:
                raise RuntimeError("bridge search left the candidate range")
            rl = r.l
            p1 += r.w1
            p2 += r.w2
            if rl is not None:
                p1 += rl.c1
                p2 += rl.c2
            a += 1 + _sz(rl)
            x = r
        elif move == "gr":
            r = y.r
            if r is None:
                raise RuntimeError("bridge search left the candidate range")
            rl = r.l
            q1 += r.w1
            q2 += r.w2
            if rl is not None:
                q1 += rl.c1
                q2 += rl.c2
            c += 1 + _sz(rl)
            y = r
        else:
            l = y.l
            if l is None:
                raise RuntimeError("bridge search left the candidate range")
            q1 -= y.w1
            q2 -= y.w2
            lr = l.r
            if lr is not None:
                q1 -= lr.c1
                q2 -= lr.c2
            c -= 1 + _sz(lr)
            y = l


# -- standalone hull-tree helpers --------------------------------------------


def build_hull_tree(diffs, fn: Optional[NodeFunction] = None):
    """Build a hull tree from a list of coordinate differences."""
    t = None
    for d1, d2 in diffs:
        n = HullNode(d1, d2, fn(d1, d2) if fn is not None else 0.0)
        t = concat3(t, n, None)
    return t


def tree_nodes(t) -> Iterator[HullNode]:
    stack = []
    while stack or t is not None:
        if t is not None:
            stack.append(t)
            t = t.l
        else:
            t = stack.pop()
            yield t
            t = t.r


def tree_vertices(t, origin=(0, 0)) -> list[CountPair]:
    """Absolute vertices of a hull tree, starting with ``origin``."""
    r1, r2 = origin
    out = [CountPair(r1, r2)]
    for n in tree_nodes(t):
        r1 += n.w1
        r2 += n.w2
        out.append(CountPair(r1, r2))
    return out


def join_hulls(H, G, fn: Optional[NodeFunction] = None):
    """Join two hull trees destructively.

    Returns ``(joined, record)`` where ``record`` holds what is needed to undo
    the join with :func:`unjoin_hulls`.
    """
    u, v, p, q = bridge(H, G)
    A, rest_h = split2(H, u)
    G1, gv, G2 = split3(G, v - 1)
    record = (u, rest_h, G1, gv.w1, gv.w2)
    _reweight(gv, q[0] - p[0], q[1] - p[1], fn)
    return concat3(A, gv, G2), record


def unjoin_hulls(C, record, fn: Optional[NodeFunction] = None):
    u, rest_h, G1, g1, g2 = record
    A, gv, G2 = split3(C, u)
    _reweight(gv, g1, g2, fn)
    return concat2(A, rest_h), concat3(G1, gv, G2)


def _reweight(n, w1, w2, fn):
    n.w1 = w1
    n.w2 = w2
    n.acc = fn(w1, w2) if fn is not None else 0.0
    _pull(n)


# -- outer tree --------------------------------------------------------------


class _Leaf:
    __slots__ = ("key", "w1", "w2")
    is_leaf = True
    height = 1

    def __init__(self, key, w1, w2):
        self.key = key
        self.w1 = w1
        self.w2 = w2


class _Inner:
    __slots__ = ("left", "right", "key", "height", "u", "rest_h", "rest_g", "g1", "g2")
    is_leaf = False

    def __init__(self, left, right, key):
        self.left = left
        self.right = right
        # every score in the left subtree is <= key < every score on the right
        self.key = key
        self.height = max(left.height, right.height) + 1
        self.u = 0
        self.rest_h = None
        self.rest_g = None
        self.g1 = 0
        self.g2 = 0


def _fix_height(node):
    lh, rh = node.left.height, node.right.height
    node.height = (lh if lh > rh else rh) + 1


class RocHullIndex:
    """Upper convex hull of the ROC points of a dynamic multiset of scored points.

    ``fn`` is an optional pure function of a vertex's coordinate difference;
    its sum over the hull is available in O(1) via :meth:`root_accumulator`.
    """

    def __init__(self, fn: Optional[NodeFunction] = None):
        self._root = None
        self._hull = None
        self._fn = fn

    # -- public API --

    @property
    def accumulator(self) -> Optional[NodeFunction]:
        return self._fn

    def set_accumulator(self, fn: Optional[NodeFunction]) -> None:
        """Register a new vertex function and recompute every stored scalar."""
        self._fn = fn
        for t in self._all_hull_trees():
            self._recompute(t)

    @property
    def totals(self) -> CountPair:
        h = self._hull
        return CountPair(h.c1, h.c2) if h is not None else CountPair(0, 0)

    @property
    def hull_root(self) -> Optional[HullNode]:
        return self._hull

    def __len__(self) -> int:
        return sum(1 for _ in self._leaves(self._root))

    def insert(self, score: float, w) -> None:
        score = check_score(score)
        w1, w2 = check_weight(w)
        if self._root is None:
            self._root = _Leaf(score, w1, w2)
            self._hull = self._mk(w1, w2)
            return
        self._root, self._hull = self._ins(self._root, self._hull, score, w1, w2)

    def remove(self, score: float, w) -> None:
        score = check_score(score)
        w1, w2 = check_weight(w)
        leaf = self._find(score)
        if leaf is None:
            raise ScoreNotFound(score)
        if w1 > leaf.w1 or w2 > leaf.w2:
            raise InsufficientWeight(
                f"score {score!r} holds {(leaf.w1, leaf.w2)}, cannot remove {(w1, w2)}"
            )
        self._root, self._hull = self._del(self._root, self._hull, score, w1, w2)

    def weight_at(self, score: float) -> CountPair:
        leaf = self._find(check_score(score))
        return CountPair(leaf.w1, leaf.w2) if leaf is not None else CountPair(0, 0)

    def hull_vertices(self) -> list[CountPair]:
        """Hull vertices from (0, 0) to the totals, in absolute counts."""
        return tree_vertices(self._hull)

    def hull_diffs(self) -> list[CountPair]:
        return [CountPair(n.w1, n.w2) for n in tree_nodes(self._hull)]

    def root_accumulator(self) -> float:
        if self._fn is None:
            raise NoAccumulatorRegistered("no vertex function registered")
        return self._hull.cacc if self._hull is not None else 0.0

    def items(self) -> Iterator[tuple[float, CountPair]]:
        for leaf in self._leaves(self._root):
            yield leaf.key, CountPair(leaf.w1, leaf.w2)

    def outer_height(self) -> int:
        return self._root.height if self._root is not None else 0

    # -- hull bookkeeping --

    def _mk(self, w1, w2):
        fn = self._fn
        return HullNode(w1, w2, fn(w1, w2) if fn is not None else 0.0)

    def _merge(self, node, hl, hr):
        u, v, p, q = bridge(hl, hr)
        A, rest_h = split2(hl, u)
        G1, gv, G2 = split3(hr, v - 1)
        node.u = u
        node.rest_h = rest_h
        node.rest_g = G1
        node.g1 = gv.w1
        node.g2 = gv.w2
        _reweight(gv, q[0] - p[0], q[1] - p[1], self._fn)
        return concat3(A, gv, G2)

    def _expose(self, node, hull):
        A, gv, G2 = split3(hull, node.u)
        _reweight(gv, node.g1, node.g2, self._fn)
        hl = concat2(A, node.rest_h)
        hr = concat3(node.rest_g, gv, G2)
        node.rest_h = node.rest_g = None
        return hl, hr

    # -- outer tree updates --

    def _find(self, score):
        node = self._root
        while node is not None and not node.is_leaf:
            node = node.left if score <= node.key else node.right
        if node is not None and node.key == score:
            return node
        return None

    def _ins(self, node, hull, s, w1, w2):
        if node.is_leaf:
            if node.key == s:
                node.w1 += w1
                node.w2 += w2
                _reweight(hull, node.w1, node.w2, self._fn)
                return node, hull
            new = _Leaf(s, w1, w2)
            nh = self._mk(w1, w2)
            if s < node.key:
                inner = _Inner(new, node, s)
                return inner, self._merge(inner, nh, hull)
            inner = _Inner(node, new, node.key)
            return inner, self._merge(inner, hull, nh)
        hl, hr = self._expose(node, hull)
        if s <= node.key:
            node.left, hl = self._ins(node.left, hl, s, w1, w2)
        else:
            node.right, hr = self._ins(node.right, hr, s, w1, w2)
        node, hl, hr = self._rebalance(node, hl, hr)
        return node, self._merge(node, hl, hr)

    def _del(self, node, hull, s, w1, w2):
        if node.is_leaf:
            node.w1 -= w1
            node.w2 -= w2
            if node.w1 == 0 and node.w2 == 0:
                return None, None
            _reweight(hull, node.w1, node.w2, self._fn)
            return node, hull
        hl, hr = self._expose(node, hull)
        if s <= node.key:
            child, ch = self._del(node.left, hl, s, w1, w2)
            if child is None:
                return node.right, hr
            node.left, hl = child, ch
        else:
            child, ch = self._del(node.right, hr, s, w1, w2)
            if child is None:
                return node.left, hl
            node.right, hr = child, ch
        node, hl, hr = self._rebalance(node, hl, hr)
        return node, self._merge(node, hl, hr)

    def _rebalance(self, node, hl, hr):
        """Restore AVL balance at an exposed node; returns the new exposed top."""
        lh, rh = node.left.height, node.right.height
        if lh > rh + 1:
            y = node.left
            if y.left.height < y.right.height:
                a, b = self._expose(y, hl)
                top, ha, hb = self._rotate_left(y, a, b)
                node.left = top
                hl = self._merge(top, ha, hb)
            return self._rotate_right(node, hl, hr)
        if rh > lh + 1:
            y = node.right
            if y.right.height < y.left.height:
                a, b = self._expose(y, hr)
                top, ha, hb = self._rotate_right(y, a, b)
                node.right = top
                hr = self._merge(top, ha, hb)
            return self._rotate_left(node, hl, hr)
        node.height = (lh if lh > rh else rh) + 1
        return node, hl, hr

    def _rotate_right(self, x, hl, hr):
        y = x.left
        ha, hb = self._expose(y, hl)
        x.left = y.right
        _fix_height(x)
        hx = self._merge(x, hb, hr)
        y.right = x
        _fix_height(y)
        return y, ha, hx

    def _rotate_left(self, x, hl, hr):
        y = x.right
        hb, hc = self._expose(y, hr)
        x.right = y.left
        _fix_height(x)
        hx = self._merge(x, hl, hb)
        y.left = x
        _fix_height(y)
        return y, hx, hc

    # -- traversal and audit --

    @staticmethod
    def _leaves(node):
        stack = [node] if node is not None else []
        while stack:
            n = stack.pop()
            if n.is_leaf:
                yield n
            else:
                stack.append(n.right)
                stack.append(n.left)

    def _all_hull_trees(self):
        if self._hull is not None:
            yield self._hull
        stack = [self._root] if self._root is not None else []
        while stack:
            n = stack.pop()
            if n.is_leaf:
                continue
            if n.rest_h is not None:
                yield n.rest_h
            if n.rest_g is not None:
                yield n.rest_g
            stack.append(n.left)
            stack.append(n.right)

    def _recompute(self, t):
        if t is None:
            return
        self._recompute(t.l)
        self._recompute(t.r)
        t.acc = self._fn(t.w1, t.w2) if self._fn is not None else 0.0
        _pull(t)

    def audit(self, oracle_hull=None) -> None:
        """Check every invariant, un-joining and re-joining each inner node.

        ``oracle_hull`` maps a local ROC polyline to its upper hull; when given,
        every partial hull is compared against it.  Raises AssertionError.
        """
        if self._root is None:
            assert self._hull is None
            return
        self._hull = self._audit(self._root, self._hull, oracle_hull)

    def _audit(self, node, hull, oracle_hull):
        _check_hull_tree(hull, self._fn)
        if node.is_leaf:
            assert hull.sz == 1 and (hull.w1, hull.w2) == (node.w1, node.w2)
            return hull
        assert abs(node.left.height - node.right.height) <= 1, "outer AVL balance"
        assert node.height == max(node.left.height, node.right.height) + 1
        before = tree_vertices(hull)
        if oracle_hull is not None:
            roc = [(0, 0)]
            for leaf in self._leaves(node):
                assert leaf.w1 or leaf.w2
                roc.append((roc[-1][0] + leaf.w1, roc[-1][1] + leaf.w2))
            assert [tuple(v) for v in before] == [tuple(v) for v in oracle_hull(roc)]
        for leaf in self._leaves(node.left):
            assert leaf.key <= node.key
        for leaf in self._leaves(node.right):
            assert leaf.key > node.key
        hl, hr = self._expose(node, hull)
        hl = self._audit(node.left, hl, oracle_hull)
        hr = self._audit(node.right, hr, oracle_hull)
        rejoined = self._merge(node, hl, hr)
        assert tree_vertices(rejoined) == before, "join/un-join round trip"
        return rejoined


def _check_hull_tree(t, fn=None) -> None:
    """Structural and geometric audit of a single hull tree."""
    nodes = list(tree_nodes(t))
    for a, b in zip(nodes, nodes[1:]):
        assert a.nxt is b, "successor thread"
        # strictly decreasing slopes d1/d2
        assert a.w1 * b.w2 > b.w1 * a.w2, "hull is not strictly concave"
    if nodes:
        assert nodes[-1].nxt is None

    def rec(n):
        if n is None:
            return 0, 0, 0, 0, 0.0
        assert n.w1 >= 0 and n.w2 >= 0 and (n.w1 or n.w2)
        lh, ls, l1, l2, la = rec(n.l)
        rh, rs, r1, r2, ra = rec(n.r)
        assert abs(lh - rh) <= 1, "hull AVL balance"
        assert n.ht == max(lh, rh) + 1 and n.sz == ls + rs + 1
        assert n.c1 == l1 + r1 + n.w1 and n.c2 == l2 + r2 + n.w2, "cweight"
        if fn is not None:
            assert n.acc == fn(n.w1, n.w2)
        assert abs(n.cacc - (la + ra + n.acc)) <= 1e-9 * max(1.0, abs(n.cacc))
        return n.ht, n.sz, n.c1, n.c2, n.cacc

    rec(t)
