import math

import pytest

from rocstream.core import (
    CountPair,
    DataPoint,
    InsufficientWeight,
    Label,
    NonFiniteScore,
    check_score,
    check_weight,
)


def test_countpair_arithmetic():
    assert CountPair(1, 2) + (3, 4) == (4, 6)
    assert CountPair(3, 4) - (1, 4) == (2, 0)
    with pytest.raises(InsufficientWeight):
        CountPair(1, 0) - (0, 1)
    assert CountPair().is_zero()


def test_countpair_of_label():
    assert CountPair.of(Label.CLASS1) == (1, 0)
    assert CountPair.of(2) == (0, 1)
    with pytest.raises(ValueError):
        CountPair.of(3)


def test_datapoint_weight():
    assert DataPoint(0.3, Label.CLASS2).weight == (0, 1)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_check_score_rejects_non_finite(bad):
    with pytest.raises(NonFiniteScore):
        check_score(bad)


def test_negative_zero_folds_to_zero():
    assert math.copysign(1.0, check_score(-0.0)) == 1.0


@pytest.mark.parametrize("bad", [(0, 0), (-1, 2), (1, -1)])
def test_check_weight_rejects(bad):
    with pytest.raises(ValueError):
        check_weight(bad)
