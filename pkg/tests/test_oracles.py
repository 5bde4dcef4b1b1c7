import random

import pytest

from rocstream.core import DataPoint, Label
from rocstream.oracles import (
    group_points,
    naive_doubled_u,
    offline_auc,
    offline_h,
    offline_roc,
    upper_hull,
)

from _streams import random_points

C1, C2 = Label.CLASS1, Label.CLASS2


def pts(*pairs):
    return [DataPoint(s, l) for s, l in pairs]


def test_naive_u_examples():
    assert naive_doubled_u(pts((1, C1), (2, C2))) == 2
    assert naive_doubled_u(pts((1, C1), (1, C2))) == 1
    assert naive_doubled_u(pts((1, C1), (2, C2), (3, C1))) == 2


@pytest.mark.parametrize("seed", range(30))
def test_sweep_matches_pair_loop(seed):
    rng = random.Random(seed)
    p = random_points(rng, rng.randrange(1, 200), distinct=rng.choice([2, 10, 100]))
    n1 = sum(x.label == C1 for x in p)
    n2 = len(p) - n1
    if n1 and n2:
        assert offline_auc(p) == naive_doubled_u(p) / (2 * n1 * n2)
    else:
        assert offline_auc(p) is None


def test_offline_auc_extremes():
    assert offline_auc(pts((0.1, C1), (0.2, C1), (0.5, C2))) == 1.0
    assert offline_auc(pts((1, C1), (1, C2), (1, C2))) == 0.5


def test_offline_roc():
    assert offline_roc(pts((0.1, C2), (0.2, C1), (0.3, C2))) == [(0, 0), (0, 1), (1, 1), (1, 2)]
    assert offline_roc([]) == [(0, 0)]
    assert offline_roc(pts((0.4, C1), (0.4, C2), (0.4, C1))) == [(0, 0), (2, 1)]


def test_group_points_merges_signed_zero():
    assert group_points(pts((-0.0, C1), (0.0, C2))) == [(0.0, 1, 1)]


def test_upper_hull_examples():
    assert upper_hull([(0, 0), (0, 1), (1, 1), (1, 2)]) == [(0, 0), (1, 1), (1, 2)]
    convex = [(0, 0), (3, 1), (4, 3), (4, 5)]
    assert upper_hull(convex) == convex
    assert upper_hull([(0, 0), (1, 1), (2, 2), (3, 3)]) == [(0, 0), (3, 3)]


def test_offline_h_extremes():
    perfect = pts((0.1, C1), (0.2, C1), (0.7, C2), (0.9, C2))
    assert offline_h(perfect) == pytest.approx(1.0, abs=1e-12)
    flat = pts((0.5, C1), (0.5, C2), (0.5, C2))
    assert offline_h(flat) == pytest.approx(0.0, abs=1e-12)
    assert offline_h(pts((0.5, C1))) is None


def test_oracles_do_not_import_tree_code():
    import rocstream.oracles as o

    src = open(o.__file__).read()
    assert "hull import" not in src and "score_index" not in src and "auc import" not in src
