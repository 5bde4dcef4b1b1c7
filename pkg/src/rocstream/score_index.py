"""AVL tree over unique scores, augmented with per-score and subtree label counts.

Each node stores the label counts of the points sharing its score (``weight``)
and the sum of those counts over its subtree (``cweight``).  That is enough to
answer "how many points of each class score strictly below sigma" with a single
root-to-leaf descent.
"""

from __future__ import annotations

from typing import Iterator

from .core import CountPair, InsufficientWeight, ScoreNotFound, check_score, check_weight

__all__ = ["ScoreIndex"]


class _Node:
    __slots__ = ("key", "w1", "w2", "c1", "c2", "left", "right", "height")

    def __init__(self, key: float, w1: int, w2: int):
        self.key = key
        self.w1 = w1
        self.w2 = w2
        self.c1 = w1
        self.c2 = w2
        self.left = None
        self.right = None
        self.height = 1


def _h(node):
    return node.height if node is not None else 0


def _pull(node):
    l, r = node.left, node.right
    c1, c2, h = node.w1, node.w2, 0
    if l is not None:
        c1 += l.c1
        c2 += l.c2
        h = l.height
    if r is not None:
        c1 += r.c1
        c2 += r.c2
        if r.height > h:
            h = r.height
    node.c1 = c1
    node.c2 = c2
    node.height = h + 1


def _rotate_right(x):
    y = x.left
    x.left = y.right
    y.right = x
    _pull(x)
    _pull(y)
    return y


def _rotate_left(x):
    y = x.right
    x.right = y.left
    y.left = x
    _pull(x)
    _pull(y)
    return y


def _balance(node):
    _pull(node)
    diff = _h(node.left) - _h(node.right)
    if diff > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if diff < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


def _insert(node, key, w1, w2):
    if node is None:
        return _Node(key, w1, w2)
    if key < node.key:
        node.left = _insert(node.left, key, w1, w2)
    elif key > node.key:
        node.right = _insert(node.right, key, w1, w2)
    else:
        node.w1 += w1
        node.w2 += w2
        node.c1 += w1
        node.c2 += w2
        return node
    return _balance(node)


def _pop_min(node):
    """Detach the minimum node; returns (new subtree root, detached node)."""
    if node.left is None:
        return node.right, node
    node.left, m = _pop_min(node.left)
    return _balance(node), m


def _remove(node, key, w1, w2):
    if node is None:
        raise ScoreNotFound(key)
    if key < node.key:
        node.left = _remove(node.left, key, w1, w2)
    elif key > node.key:
        node.right = _remove(node.right, key, w1, w2)
    else:
        if w1 > node.w1 or w2 > node.w2:
            raise InsufficientWeight(
                f"score {key!r} holds {(node.w1, node.w2)}, cannot remove {(w1, w2)}"
            )
        node.w1 -= w1
        node.w2 -= w2
        if node.w1 or node.w2:
            node.c1 -= w1
            node.c2 -= w2
            return node
        if node.left is None:
            return node.right
        if node.right is None:
            return node.left
        right, succ = _pop_min(node.right)
        succ.left = node.left
        succ.right = right
        return _balance(succ)
    return _balance(node)


class ScoreIndex:
    """Multiset of scored, labelled points keyed by unique score.

    >>> idx = ScoreIndex()
    >>> idx.insert(0.1, (1, 0)); idx.insert(0.2, (0, 1)); idx.insert(0.3, (1, 0))
    >>> idx.left_count(0.3)
    CountPair(c1=1, c2=1)
    """

    def __init__(self):
        self.root = None

    def __len__(self) -> int:
        """Number of distinct scores."""
        return sum(1 for _ in self._walk(self.root))

    @property
    def totals(self) -> CountPair:
        r = self.root
        return CountPair(r.c1, r.c2) if r is not None else CountPair(0, 0)

    def insert(self, score: float, w) -> None:
        score = check_score(score)
        w1, w2 = check_weight(w)
        self.root = _insert(self.root, score, w1, w2)

    def remove(self, score: float, w) -> None:
        score = check_score(score)
        w1, w2 = check_weight(w)
        self.root = _remove(self.root, score, w1, w2)

    def left_count(self, score: float) -> CountPair:
        """Summed weight of all points with score strictly below ``score``."""
        x = self.root
        u1 = u2 = 0
        while x is not None:
            if x.key < score:
                l = x.left
                u1 += x.w1
                u2 += x.w2
                if l is not None:
                    u1 += l.c1
                    u2 += l.c2
                x = x.right
            elif x.key > score:
                x = x.left
            else:
                l = x.left
                if l is not None:
                    u1 += l.c1
                    u2 += l.c2
                break
        return CountPair(u1, u2)

    def weight_at(self, score: float) -> CountPair:
        x = self.root
        while x is not None:
            if score < x.key:
                x = x.left
            elif score > x.key:
                x = x.right
            else:
                return CountPair(x.w1, x.w2)
        return CountPair(0, 0)

    def height(self) -> int:
        return _h(self.root)

    def items(self) -> Iterator[tuple[float, CountPair]]:
        """(score, weight) pairs in increasing score order."""
        for node in self._walk(self.root):
            yield node.key, CountPair(node.w1, node.w2)

    @staticmethod
    def _walk(node):
        stack = []
        while stack or node is not None:
            if node is not None:
                stack.append(node)
                node = node.left
            else:
                node = stack.pop()
                yield node
                node = node.right

    def check(self) -> None:
        """Audit every structural invariant; raises AssertionError on violation."""

        def rec(node, lo, hi):
            if node is None:
                return 0, 0, 0
            assert node.w1 >= 0 and node.w2 >= 0 and (node.w1 or node.w2), "zero-weight node"
            assert lo is None or node.key > lo, "keys out of order"
            assert hi is None or node.key < hi, "keys out of order"
            l1, l2, lh = rec(node.left, lo, node.key)
            r1, r2, rh = rec(node.right, node.key, hi)
            assert node.c1 == l1 + r1 + node.w1 and node.c2 == l2 + r2 + node.w2, "cweight"
            assert abs(lh - rh) <= 1, "AVL balance"
            assert node.height == max(lh, rh) + 1, "height"
            return node.c1, node.c2, node.height

        rec(self.root, None, None)
