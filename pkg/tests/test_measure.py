from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from compdyn.measure import (
    EMPTY,
    AtomicSpace,
    MeasurableSet,
    SimpleFunction,
    h3_delta,
    h4_epsilon,
    lp_norm,
    lp_norm_pow,
    measure,
    strictly_less,
)
from compdyn.models.odometer import build_odometer, digit_set
from compdyn.models.partition import build_partition_example, c_set, right_tail


def test_partition_c2_mass_with_tail():
    space, _ = build_partition_example(20)
    assert space.measure(c_set(space, 2)) + right_tail(20) == F(1, 2)


def test_empty_set_is_null():
    space, _ = build_odometer(3)
    assert measure(space, EMPTY) == 0


def test_odometer_digit_cylinder():
    space, _ = build_odometer(3)
    assert space.measure(space.hull(digit_set(space, 3, {3, 4, 5}))) == F(1, 8)


def test_space_rejects_bad_input():
    with pytest.raises(ValueError):
        AtomicSpace.from_weights([1, 0])
    with pytest.raises(ValueError):
        AtomicSpace((F(1), F(1)), ((0,), (0, 1)), F(0))
    with pytest.raises(ValueError):
        AtomicSpace((F(1), F(1)), ((0,),), F(0))


def test_blocks_and_complement():
    space = AtomicSpace.from_weights([F(1, 2), F(1, 4), F(1, 4)], blocks=[(0, 1), (2,)])
    s = MeasurableSet.of(0)
    assert space.measure(s) == F(3, 4)
    assert space.complement(s) == MeasurableSet.of(1)
    assert space.is_measurable({0, 1}) and not space.is_measurable({0})
    assert space.hull({1}) == MeasurableSet.of(0)


def test_norm_examples():
    space = AtomicSpace.from_weights([F(1, 8), F(7, 8)])
    A = MeasurableSet.of(0)
    assert lp_norm(SimpleFunction.indicator(A, 2), space) == pytest.approx((1 / 8) ** 0.5)
    one = AtomicSpace.from_weights([F(1)])
    assert lp_norm(SimpleFunction.indicator(MeasurableSet.of(0), 1, 2), one) == 2
    halves = AtomicSpace.from_weights([F(1, 2), F(1, 2)])
    assert lp_norm(SimpleFunction({0: 1, 1: 3}), halves) == 2


def test_simple_function_drops_zeros_and_checks_p():
    assert SimpleFunction({0: 0, 1: 2}) == SimpleFunction({1: 2})
    with pytest.raises(ValueError):
        SimpleFunction({0: 1}, p=F(1, 2))


def test_h3_h4_examples():
    assert h3_delta(F(1, 2), 1) == F(1, 4)
    assert h3_delta(2, 2) == pytest.approx(1.0)
    assert h4_epsilon(1, F(1, 2), 1) == F(1, 2)
    assert h4_epsilon(2, 1, 2) == F(1, 4)
    with pytest.raises(ValueError):
        h4_epsilon(0, 1, 1)


def test_h4_boundary_case():
    # psi = 2M on a set of measure h4_epsilon has norm exactly eta/2
    eta, M, p = F(3, 2), F(2), 2
    eps = h4_epsilon(eta, M, p)
    space = AtomicSpace.from_weights([eps, 1 - eps])
    psi = SimpleFunction({0: 2 * M}, p)
    assert lp_norm_pow(psi, space) == (eta / 2) ** p


def test_strictly_less_float_tolerance():
    assert strictly_less(F(1, 3), F(1, 2))
    assert not strictly_less(0.3, 0.3 + 1e-14)


@given(st.lists(st.integers(1, 50), min_size=1, max_size=10), st.data())
def test_measure_is_additive(ws, data):
    space = AtomicSpace.from_weights([F(w, 7) for w in ws])
    ids = list(range(len(ws)))
    s = MeasurableSet(frozenset(data.draw(st.sets(st.sampled_from(ids)))))
    t = MeasurableSet(frozenset(data.draw(st.sets(st.sampled_from(ids))))) - s
    assert space.measure(s | t) == space.measure(s) + space.measure(t)
