"""End-to-end acceptance checks, one test per criterion."""

import cmath
import random
import time
from fractions import Fraction as F
from functools import lru_cache

import numpy as np

from compdyn.criteria import (
    TransitivityCertificate,
    salas_mixing,
    salas_unilateral,
    search_mixing,
    search_runaway_exact,
    search_transitivity,
    verify_transitivity,
)
from compdyn.criteria.certificates import make_transitivity_certificate
from compdyn.dynamics import (
    EXIT,
    AtomMap,
    bimeasurability_probe,
    decompose,
    image_atoms,
    iterate,
    pullback_sigma_algebra_equals,
)
from compdyn.hypercyclic import ApproximationRequest, construct_phi
from compdyn.measure import (
    AtomicSpace,
    MeasurableSet,
    SimpleFunction,
    h4_epsilon,
    lp_norm_pow,
)
from compdyn.models import parse_model
from compdyn.models.disk import (
    DiskAutomorphism,
    complement_of_arcs_at,
    disk_classify,
    disk_measure_pullback,
    disk_report,
    poisson_check,
)
from compdyn.models.interval import interval_analyze, parse_interval_system
from compdyn.models.odometer import build_odometer, digit_set, rn_table
from compdyn.models.partition import build_partition_example, c_set, d_set, left_tail, right_tail
from compdyn.models.shift import corollary32_block_starts, corollary32_weights
from compdyn.mwis import decomposition_mwis


def test_criterion_1_odometer_rn_bound(criterion):
    start = time.perf_counter()
    values = [v for _, v in rn_table(5)]
    elapsed = time.perf_counter() - start
    lowest = min(values)
    ok = lowest == F(1, 7) and all(v >= F(1, 7) for v in values) and all(isinstance(v, F) for v in values)
    ok = ok and elapsed < 1.0
    assert criterion(1, ok, f"min RN derivative over {len(values)} atoms = {lowest}, {elapsed:.3f}s")


def test_criterion_2_digit_window_runs_away(criterion):
    space, f = build_odometer(4)
    B_atoms = digit_set(space, 3, {0, 1, 2})
    B = space.hull(B_atoms)
    k = 3 * 2 * 2  # n * |A_1| * |A_2|
    complement = space.measure(space.everything() - B)
    img, exited = image_atoms(iterate(f, k), B_atoms)
    cert = make_transitivity_certificate(space, f, F(1, 5), None, B, k)
    report = verify_transitivity(space, f, cert)
    ok = k == 12 and complement == F(1, 8) and not exited and not (img & B_atoms) and report.valid
    assert criterion(2, ok, f"mu(X\\B)={complement}, B & f^12(B) empty={not (img & B_atoms)}, certificate valid={report.valid}")


def _brute_max_independent(weights, forward):
    """Heaviest atom set B with B and f(B) disjoint, by enumerating bitmasks."""
    n = len(weights)
    den = int(np.lcm.reduce([w.denominator for w in weights]))
    masks = np.arange(1 << n, dtype=np.int64)
    for a, t in enumerate(forward):
        if t != EXIT:
            masks = masks[((masks >> a) & (masks >> t) & 1) == 0]
    totals = np.zeros(len(masks), dtype=np.int64)
    for a, w in enumerate(weights):
        totals += ((masks >> a) & 1) * int(w * den)
    return F(int(totals.max()), den)


def test_criterion_3_half_rotation_refutation(criterion):
    space, f = build_odometer(4)
    start = time.perf_counter()
    result = search_runaway_exact(space, f, F(1, 10), 24)
    elapsed = time.perf_counter() - start
    headline = result.max_mass == F(1, 2) and result.exact and result.kind.name == "REFUTED" and elapsed < 1.0
    assert space.window_mass - F(1, 10) == F(9, 10)

    sub, _ = build_odometer(3)
    weights = list(sub.weights[:16])
    sub_space = AtomicSpace.from_weights(weights)
    step = AtomMap(tuple(a + 1 if a + 1 < 16 else EXIT for a in range(16)))
    mismatches = []
    for k in range(1, 16):
        fk = iterate(step, k)
        dp = search_runaway_exact(sub_space, step, F(1, 10), k).max_mass
        brute = _brute_max_independent(weights, fk.forward)
        if dp != brute:
            mismatches.append((k, dp, brute))
    ok = headline and not mismatches
    assert criterion(
        3,
        ok,
        f"k=24 max_mass={result.max_mass} <= 9/10, {elapsed:.3f}s; DP equals brute force on 16-atom window for k=1..15",
    ), mismatches


def test_criterion_4_oscillating_shift_weights(criterion):
    blocks = 20
    nu = corollary32_weights(blocks)
    starts = corollary32_block_starts(blocks)
    ends = starts[1:] + [len(nu)]
    running = all(min(nu[:end]) == F(1, 2**n) for n, end in enumerate(ends, start=1))
    uni = salas_unilateral(nu, checkpoints=starts)
    mix = salas_mixing(nu, checkpoints=starts)
    ratios = all(F(1, 2) <= nu[i + 1] / nu[i] <= 2 for i in range(len(nu) - 1))
    sups = all(s == 1 for s in mix.details["tail_sup"])
    ok = running and uni.certified and mix.refuted and ratios and sups
    assert criterion(
        4,
        ok,
        f"running min after V_n = 2^-n: {running}; liminf proxy {uni.kind.value}; limit proxy {mix.kind.value}; ratios in [1/2,2]: {ratios}",
    )


def test_criterion_5_partition_mixing(criterion):
    n, eps = 20, F(3, 5)
    space, f = build_partition_example(n)
    C2, D2 = c_set(space, 2), d_set(space, 2)
    masses = space.measure(C2) + right_tail(n) == F(1, 2) and space.measure(D2) + left_tail(n) == F(1, 8)
    # With A = X the set X \ (C2 u D2) leaves 5/8 >= 0.6 outside, so the
    # search uses its own B; the stated B is checked against A = B.
    verdict = search_mixing(space, f, eps, None, 40, 40)
    k0 = verdict.details.get("k0")
    B = space.everything() - (C2 | D2)
    stated = [make_transitivity_certificate(space, f, eps, B, B, k) for k in range(3, 41)]
    stated_ok = all(verify_transitivity(space, f, c).valid for c in stated)
    pull = pullback_sigma_algebra_equals(space, f).equal
    probe = [space.label(space.blocks[b][0]) for b in bimeasurability_probe(space, f)]
    ok = masses and verdict.certified and k0 is not None and stated_ok and pull and -2 in probe
    assert criterion(
        5,
        ok,
        f"search_mixing certified all k in [{k0}, 40]; X\\(C2 u D2) valid for A=B at k=3..40; "
        f"mu(C2)=1/2, mu(D2)=1/8; pullback equal={pull}; non-measurable images at {probe}",
    )


def test_criterion_6_interval_dichotomy(criterion):
    halving = interval_analyze(parse_interval_system("halving"), k_max=40)
    exact = all(m == F(1, 2**k) for k, m in enumerate(halving.image_masses))
    line = interval_analyze(parse_interval_system("halving-line"), k_max=40)
    log = interval_analyze(parse_interval_system("log1p"), k_max=60, tol=1e-10)
    ok = (
        halving.verdict == "E1"
        and exact
        and line.verdict == "E2"
        and log.dissipative is True
        and log.contraction is False
        and log.c2 == 1
    )
    assert criterion(
        6,
        ok,
        f"x/2 on [0,1]: {halving.verdict}, masses 2^-k exact={exact}; x/2 on line: {line.verdict}; "
        f"log1p: dissipative={log.dissipative}, contraction={log.contraction}, c2={log.c2}",
    )


def test_criterion_7_disk(criterion):
    hyper = DiskAutomorphism(0.5, 0.0)
    cls = disk_classify(hyper)
    points = {round(z.real, 12) for z in (cls.denjoy_wolff, cls.backward_denjoy_wolff)}
    report = disk_report(hyper, 0.1, 64)
    k0 = report["k0"]
    rotation = DiskAutomorphism(0.0, 1.0)
    B = complement_of_arcs_at([1, -1], 0.05)
    lam = sum(length for _, length in B)
    invariant = all(abs(disk_measure_pullback(rotation, B, k) - lam) < 1e-12 for k in range(1, 65))
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(100):
        r, t = rng.random() ** 0.5 * 0.95, rng.random()
        omega = r * cmath.exp(2j * cmath.pi * t)
        aut = DiskAutomorphism(complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)), rng.uniform(0, 6.28))
        lhs, rhs = poisson_check(aut, omega, (rng.random(), rng.uniform(0.01, 0.9)))
        worst = max(worst, abs(lhs - rhs))
    ok = cls.kind == "hyperbolic" and points == {1.0, -1.0} and k0 is not None and k0 <= 64 and invariant and worst < 1e-12
    assert criterion(
        7,
        ok,
        f"a=1/2 hyperbolic, fixed points {sorted(points)}, k0={k0}; rotation keeps lambda(B)={lam:.3f}; Poisson max diff {worst:.1e}",
    )


SYSTEMS = ["odometer:4", "shift:corollary32", "shift:unilateral", "partition-z:24", "interval:halving"]


@lru_cache(maxsize=None)
def _model(name):
    return parse_model(name)


def _approximation_domain(name):
    m = _model(name)
    if m.default_A is not None:
        return m.default_A
    if name.startswith("odometer"):
        return m.space.everything()
    if name.startswith("partition"):
        # keep f^k(A) inside the window for the k the searches return
        return m.space.hull(a for a, z in enumerate(m.space.labels) if -4 <= z < 4)
    return MeasurableSet(frozenset(range(m.space.n_blocks // 4)))


@lru_cache(maxsize=None)
def _certify(name, eps):
    m = _model(name)
    return search_transitivity(m.space, m.f, eps, _approximation_domain(name), 200)


def test_criterion_8_constructive(criterion):
    rng = random.Random(7)
    built, failures, uncertified = 0, [], 0
    for trial in range(200):
        name = rng.choice(SYSTEMS)
        m = _model(name)
        p = rng.choice([1, 2, F(3, 2)])
        eta = rng.choice([F(1, 2), F(1), F(2), F(4)])
        M = rng.choice([F(1), F(2), F(4)])
        A = sorted(_approximation_domain(name).block_ids)

        def random_function():
            blocks = rng.sample(A, min(len(A), rng.randint(1, 4)))
            values = {b: F(rng.randint(-8, 8), 8) * M for b in blocks}
            values[blocks[0]] = M * rng.choice([1, -1])
            return SimpleFunction(values, p)

        req = ApproximationRequest(random_function(), random_function(), eta, p)
        eps = h4_epsilon(eta, req.M, p)
        verdict = _certify(name, eps)
        if not verdict.certified:
            uncertified += 1
            continue
        try:
            phi = construct_phi(m.space, m.f, req, verdict.certificate)
        except Exception as exc:  # any error is a failed trial
            failures.append((trial, name, repr(exc)))
            continue
        built += 1
        if not phi.within(eta):
            failures.append((trial, name, float(phi.err1), float(phi.err2), float(eta)))
    ok = not failures and built >= 150
    assert criterion(
        8,
        ok,
        f"200 trials: {built} constructions within eta, {len(failures)} failures, {uncertified} without a certificate at h4 epsilon",
    ), failures[:5]


def _random_injective(rng, n):
    forward, used = [], set()
    for a in range(n):
        t = rng.choice([x for x in range(n) if x not in used] + [EXIT])
        if t != EXIT:
            used.add(t)
        forward.append(t)
    return AtomMap(tuple(forward))


def test_criterion_9_property_suites(criterion):
    start = time.perf_counter()
    rng = random.Random(99)
    mwis_bad = []
    for trial in range(100):
        n = rng.randint(1, 20)
        weights = [F(rng.randint(1, 20), rng.randint(1, 8)) for _ in range(n)]
        f = _random_injective(rng, n)
        total, chosen = decomposition_mwis(decompose(f), weights)
        independent = all(f.forward[a] not in chosen for a in chosen)
        if total != _brute_max_independent(weights, f.forward) or not independent or sum(weights[a] for a in chosen) != total:
            mwis_bad.append(trial)

    additivity_bad = []
    for trial in range(500):
        n = rng.randint(1, 12)
        space = AtomicSpace.from_weights([F(rng.randint(1, 30), rng.randint(1, 9)) for _ in range(n)])
        ids = list(range(n))
        s = MeasurableSet(frozenset(rng.sample(ids, rng.randint(0, n))))
        t = MeasurableSet(frozenset(rng.sample(ids, rng.randint(0, n)))) - s
        p = rng.choice([1, 2, 3])
        small = {b: F(rng.randint(0, 5), 2) for b in ids}
        large = {b: v + F(rng.randint(0, 5), 3) for b, v in small.items()}
        add = space.measure(s | t) == space.measure(s) + space.measure(t)
        lattice = lp_norm_pow(SimpleFunction(small, p), space) <= lp_norm_pow(SimpleFunction(large, p), space)
        if not (add and lattice):
            additivity_bad.append(trial)

    monotone_bad, monotone_checked = [], 0
    space, f = build_odometer(3)
    for trial in range(100):
        k = rng.randint(1, 24)
        B = MeasurableSet(frozenset(rng.sample(range(space.n_blocks), rng.randint(1, space.n_blocks))))
        eps = F(rng.randint(1, 20), 20)
        cert = make_transitivity_certificate(space, f, eps, None, B, k)
        if verify_transitivity(space, f, cert).valid:
            monotone_checked += 1
            bigger = TransitivityCertificate(eps + F(rng.randint(1, 10), 20), None, B, k, cert.C, cert.measured, cert.C_has_tail)
            if not verify_transitivity(space, f, bigger).valid:
                monotone_bad.append(trial)
    elapsed = time.perf_counter() - start
    ok = not (mwis_bad or additivity_bad or monotone_bad) and monotone_checked >= 20
    assert criterion(
        9,
        ok,
        f"MWIS vs brute force 100/100, additivity and lattice 500/500, epsilon monotonicity on {monotone_checked} valid of 100 "
        f"(bad: {len(mwis_bad)}, {len(additivity_bad)}, {len(monotone_bad)}); {elapsed:.1f}s",
    )
