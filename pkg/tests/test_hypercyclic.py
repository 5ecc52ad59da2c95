from fractions import Fraction as F

import pytest

from compdyn.criteria import make_transitivity_certificate, search_transitivity
from compdyn.dynamics import AtomMap
from compdyn.errors import BudgetTooLoose, ExitEncountered, NoSolvablePullback
from compdyn.hypercyclic import ApproximationRequest, construct_phi, orbit_segment
from compdyn.measure import AtomicSpace, MeasurableSet, SimpleFunction, h4_epsilon, lp_norm
from compdyn.models import parse_model
from compdyn.models.odometer import build_odometer, digit_set


@pytest.fixture(scope="module")
def digit_window():
    space, f = build_odometer(4)
    B = space.hull(digit_set(space, 3, {0, 1, 2}))
    return space, f, make_transitivity_certificate(space, f, F(1, 8) + F(1, 1000), None, B, 12)


def test_two_and_four_indicator(digit_window):
    space, f, cert = digit_window
    A = space.everything()
    # h4 = (eta / 2)^p / (2M)^p with M = 4
    for p, eta in ((1, 16 * cert.epsilon), (2, F(6))):
        req = ApproximationRequest(SimpleFunction.indicator(A, p, 2), SimpleFunction.indicator(A, p, 4), eta, p)
        assert h4_epsilon(eta, req.M, p) >= cert.epsilon
        phi = construct_phi(space, f, req, cert)
        assert phi.within(eta)
        assert phi.err1 < eta and phi.err2 < eta


def test_zero_targets(digit_window):
    space, f, cert = digit_window
    req = ApproximationRequest(SimpleFunction.zero(), SimpleFunction.zero(), F(1, 2))
    phi = construct_phi(space, f, req, cert)
    assert phi.phi == SimpleFunction.zero() and phi.err1_pow == 0 and phi.err2_pow == 0


def test_budget_too_loose(digit_window):
    space, f, cert = digit_window
    one = SimpleFunction.indicator(MeasurableSet.of(0))
    with pytest.raises(BudgetTooLoose):
        construct_phi(space, f, ApproximationRequest(one, one, F(1, 100)), cert)


def test_support_outside_a():
    m = parse_model("shift:corollary32")
    v = search_transitivity(m.space, m.f, F(1, 8), m.default_A, 200)
    outside = SimpleFunction.indicator(MeasurableSet.of(5))
    with pytest.raises(ValueError):
        construct_phi(m.space, m.f, ApproximationRequest(outside, outside, F(1)), v.certificate)


def test_geometric_shift_prefix():
    m = parse_model("shift:unilateral", 40)
    A = MeasurableSet(frozenset(range(8)))
    eta = F(1)
    psi = SimpleFunction.indicator(A)
    eps = h4_epsilon(eta, 1, 1)
    v = search_transitivity(m.space, m.f, eps, A, 30)
    phi = construct_phi(m.space, m.f, ApproximationRequest(psi, psi, eta), v.certificate)
    assert phi.within(eta)
    placed = {b for _, blocks in phi.pieces for b in blocks}
    for b in v.certificate.B.block_ids - placed:
        assert phi.phi(b) == psi(b)
    assert all(phi.phi(b) == 1 for b in placed)


def test_exit_target_is_not_solvable():
    space = AtomicSpace.from_weights([F(1, 2), F(1, 4), F(1, 4)])
    f = AtomMap((1, 2, -1))
    cert = make_transitivity_certificate(space, f, F(1), None, MeasurableSet.of(1, 2), 1)
    psi = SimpleFunction.indicator(MeasurableSet.of(2))
    with pytest.raises(NoSolvablePullback):
        construct_phi(space, f, ApproximationRequest(psi, psi, F(4)), cert)


def test_orbit_of_indicator_on_injective_map():
    m = parse_model("shift:corollary32", 40)
    phi = SimpleFunction.indicator(MeasurableSet.of(10))
    orbit = orbit_segment(m.space, m.f, phi, 5)
    assert [o.support for o in orbit] == [MeasurableSet.of(10 - j) for j in range(6)]
    norms = [lp_norm(o, m.space) for o in orbit]
    assert norms == [m.space.weights[10 - j] for j in range(6)]


def test_constant_orbit_on_cycle():
    space = AtomicSpace.from_weights([1, 1, 1])
    rot = AtomMap((1, 2, 0))
    c = SimpleFunction({0: 3, 1: 3, 2: 3})
    assert orbit_segment(space, rot, c, 4) == [c] * 5


def test_orbit_stops_at_window_edge():
    m = parse_model("shift:bilateral:geometric", 4)
    with pytest.raises(ExitEncountered):
        orbit_segment(m.space, m.f, SimpleFunction.indicator(MeasurableSet.of(0)), 2)
    with pytest.raises(ValueError):
        orbit_segment(m.space, m.f, SimpleFunction.zero(), -1)
