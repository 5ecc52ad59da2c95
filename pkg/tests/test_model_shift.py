from fractions import Fraction as F
import math

import pytest

from compdyn.dynamics import EXIT
from compdyn.models.shift import (
    WeightedShiftSpec,
    build_shift,
    corollary32_block_starts,
    corollary32_weights,
    shift_weights,
)


def test_corollary32_first_blocks():
    assert corollary32_weights(2) == [1, F(1, 2), 1, F(1, 2), F(1, 4), F(1, 2)]
    assert corollary32_block_starts(4) == [0, 2, 6, 12]


def test_block_minimum_and_ratio():
    nu = corollary32_weights(12)
    starts = corollary32_block_starts(12) + [len(nu)]
    for n in range(1, 13):
        assert min(nu[starts[n - 1] : starts[n]]) == F(1, 2**n)
    assert all(F(1, 2) <= b / a <= 2 for a, b in zip(nu, nu[1:]))


def test_geometric_tails():
    _, tail = shift_weights(WeightedShiftSpec("unilateral", "geometric", 10))
    assert tail == F(2, 2**10)
    _, tail = shift_weights(WeightedShiftSpec("bilateral", "geometric", 10))
    assert tail == F(3, 2**10)
    _, tail = shift_weights(WeightedShiftSpec("unilateral", "constant", 10))
    assert tail == math.inf


def test_build_shift_edges():
    space, f = build_shift(WeightedShiftSpec("bilateral", "geometric", 3))
    assert list(space.labels) == [-3, -2, -1, 0, 1, 2]
    assert f.forward[-1] == EXIT and f.forward[0] == 1
    assert f.open_atoms == frozenset({0})
    space, f = build_shift(WeightedShiftSpec("unilateral", [1, 2, 3], 3))
    assert space.weights == (1, 2, 3) and not f.open_atoms


def test_spec_validation():
    with pytest.raises(ValueError):
        WeightedShiftSpec("sideways", "geometric", 3)
    with pytest.raises(ValueError):
        WeightedShiftSpec("bilateral", "corollary32", 3)
    with pytest.raises(ValueError):
        WeightedShiftSpec("unilateral", "unknown", 3)
    with pytest.raises(ValueError):
        shift_weights(WeightedShiftSpec("unilateral", [1, 2], 3))
