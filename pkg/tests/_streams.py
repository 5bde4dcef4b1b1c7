"""Random stream generators shared by the test modules."""

import random

from rocstream.core import DataPoint, Label


def random_points(rng: random.Random, n: int, distinct: int = 20, p1: float = 0.5):
    """``n`` points with scores drawn from ``distinct`` values, so ties are common."""
    out = []
    for _ in range(n):
        label = Label.CLASS1 if rng.random() < p1 else Label.CLASS2
        out.append(DataPoint(rng.randrange(distinct) / distinct, label))
    return out


def random_ops(rng: random.Random, length: int, distinct: int = 20, p1: float = 0.5,
               p_delete: float = 0.4):
    """Interleaved ``("add" | "del", point)`` operations; deletes hit retained points."""
    live = []
    ops = []
    for _ in range(length):
        if live and rng.random() < p_delete:
            i = rng.randrange(len(live))
            live[i], live[-1] = live[-1], live[i]
            ops.append(("del", live.pop()))
        else:
            label = Label.CLASS1 if rng.random() < p1 else Label.CLASS2
            p = DataPoint(rng.randrange(distinct) / distinct, label)
            live.append(p)
            ops.append(("add", p))
    return ops


def replay(ops):
    """Yield the retained multiset after each operation."""
    live = []
    for kind, p in ops:
        if kind == "add":
            live.append(p)
        else:
            live.remove(p)
        yield kind, p, live
