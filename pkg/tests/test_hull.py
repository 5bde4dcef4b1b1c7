import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rocstream.core import InsufficientWeight, NoAccumulatorRegistered, ScoreNotFound
from rocstream.hull import RocHullIndex, build_hull_tree, join_hulls, tree_vertices
from rocstream.hull import unjoin_hulls
from rocstream.oracles import offline_roc, upper_hull

from _streams import random_ops, replay

C1, C2 = (1, 0), (0, 1)


def three_point():
    h = RocHullIndex()
    h.insert(0.1, C2)
    h.insert(0.2, C1)
    h.insert(0.3, C2)
    return h


def test_three_point_hull():
    assert three_point().hull_vertices() == [(0, 0), (1, 1), (1, 2)]


def test_single_point():
    h = RocHullIndex()
    h.insert(0.5, C1)
    assert h.hull_vertices() == [(0, 0), (1, 0)]


def test_perfect_separation():
    h = RocHullIndex()
    for s in (0.1, 0.2, 0.3):
        h.insert(s, C1)
    for s in (0.6, 0.7):
        h.insert(s, C2)
    assert h.hull_vertices() == [(0, 0), (3, 0), (3, 2)]


def test_insert_remove_inverse():
    h = three_point()
    before = h.hull_vertices()
    h.insert(0.25, (2, 1))
    h.remove(0.25, (2, 1))
    assert h.hull_vertices() == before
    h.audit(upper_hull)


def test_remove_examples():
    h = three_point()
    h.remove(0.2, C1)
    assert h.hull_vertices() == [(0, 0), (0, 2)]
    with pytest.raises(ScoreNotFound):
        RocHullIndex().remove(0.1, C1)
    with pytest.raises(InsufficientWeight):
        h.remove(0.1, (0, 2))
    assert h.hull_vertices() == [(0, 0), (0, 2)]


def test_empty_and_endpoints():
    assert RocHullIndex().hull_vertices() == [(0, 0)]
    rng = random.Random(2)
    h = RocHullIndex()
    for _ in range(100):
        h.insert(rng.randrange(30), (rng.randrange(3), 1))
    v = h.hull_vertices()
    assert v[0] == (0, 0) and v[-1] == h.totals


def test_root_accumulator():
    h = three_point()
    with pytest.raises(NoAccumulatorRegistered):
        h.root_accumulator()
    h.set_accumulator(lambda d1, d2: d1 + d2)
    assert h.root_accumulator() == sum(h.totals)
    h.set_accumulator(lambda d1, d2: 0.0)
    assert h.root_accumulator() == 0.0


def test_bridge_already_convex():
    H = build_hull_tree([(2, 0)])
    G = build_hull_tree([(0, 2)])
    joined, _ = join_hulls(H, G)
    assert tree_vertices(joined) == [(0, 0), (2, 0), (2, 2)]


def test_bridge_skips_dent():
    # H: (0,0)->(1,2); G from (1,2): (1,2)->(1,3)->(4,3) puts (1,2) inside the joint hull
    H = build_hull_tree([(1, 2)])
    G = build_hull_tree([(0, 1), (3, 0)])
    joined, rec = join_hulls(H, G)
    assert tree_vertices(joined) == upper_hull([(0, 0), (1, 2), (1, 3), (4, 3)])
    H2, G2 = unjoin_hulls(joined, rec)
    assert tree_vertices(H2) == [(0, 0), (1, 2)]
    assert tree_vertices(G2) == [(0, 0), (0, 1), (3, 1)]


def _hull_diffs(vs):
    return [(b[0] - a[0], b[1] - a[1]) for a, b in zip(vs, vs[1:])]


@pytest.mark.parametrize("seed", range(10))
def test_random_split_joins(seed):
    rng = random.Random(seed)
    for _ in range(50):
        steps = [(rng.randrange(4), rng.randrange(4)) for _ in range(rng.randrange(2, 30))]
        steps = [s for s in steps if s != (0, 0)] or [(1, 0), (0, 1)]
        if len(steps) < 2:
            steps.append((0, 1))
        k = rng.randrange(1, len(steps))
        roc_l = [(0, 0)]
        for a, b in steps[:k]:
            roc_l.append((roc_l[-1][0] + a, roc_l[-1][1] + b))
        roc_r = [(0, 0)]
        for a, b in steps[k:]:
            roc_r.append((roc_r[-1][0] + a, roc_r[-1][1] + b))
        H = build_hull_tree(_hull_diffs(upper_hull(roc_l)))
        G = build_hull_tree(_hull_diffs(upper_hull(roc_r)))
        joined, _ = join_hulls(H, G)
        full = [(0, 0)]
        for a, b in steps:
            full.append((full[-1][0] + a, full[-1][1] + b))
        assert [tuple(v) for v in tree_vertices(joined)] == upper_hull(full)


@pytest.mark.parametrize("seed", range(8))
def test_matches_oracle_every_step(seed):
    rng = random.Random(100 + seed)
    h = RocHullIndex()
    ops = random_ops(rng, 400, distinct=rng.choice([5, 40, 400]), p1=rng.choice([0.5, 0.2]))
    for i, (kind, p, live) in enumerate(replay(ops)):
        if kind == "add":
            h.insert(p.score, p.weight)
        else:
            h.remove(p.score, p.weight)
        assert [tuple(v) for v in h.hull_vertices()] == upper_hull(offline_roc(live))
        if i % 50 == 0:
            h.audit(upper_hull)
    h.audit(upper_hull)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 25), st.integers(0, 3), st.integers(0, 3)), max_size=60))
def test_slopes_strictly_decrease_and_accumulator(batches):
    h = RocHullIndex(lambda d1, d2: d1 * d1 + 3 * d2)
    for k, w1, w2 in batches:
        if w1 or w2:
            h.insert(k, (w1, w2))
    d = h.hull_diffs()
    for (a1, a2), (b1, b2) in zip(d, d[1:]):
        assert a1 * b2 > b1 * a2
    want = sum(a * a + 3 * b for a, b in d)
    assert h.root_accumulator() == pytest.approx(want, rel=1e-12)
    h.audit(upper_hull)


def test_outer_tree_stays_balanced():
    h = RocHullIndex()
    for i in range(2000):
        h.insert(i, C1 if i % 3 else C2)
    assert h.outer_height() <= 1.45 * 11 + 2
    assert len(h) == 2000
    for i in range(0, 2000, 2):
        h.remove(i, C1 if i % 3 else C2)
    assert len(h) == 1000
    h.audit()
