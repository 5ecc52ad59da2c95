"""Certificate records, verdicts and from-scratch verification.

The verifier never reuses anything a search computed: it rebuilds ``f^k`` by
repeated squaring and re-measures every inequality.

Sets live inside the truncation window. Whatever happens beyond it is
charged conservatively with the declared tail mass:

* ``A = None`` stands for the whole space, so ``mu(A \\ B)`` includes the tail;
* if ``f^k(B)`` leaves the window, ``C`` must also contain the complement of
  the window, and ``mu(C)`` pays the tail;
* if ``B`` may have ``k``-step preimages outside the window (open atoms),
  ``mu(f^{-k}(B))`` pays the tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple

from ..dynamics import (
    AtomMap,
    image_atoms,
    iterate,
    preimage_atoms,
    pullback_sigma_algebra_equals,
    touches_open,
)
from ..measure import AtomicSpace, MeasurableSet, Number, close, strictly_less


class VerdictKind(str, Enum):
    CERTIFIED = "CertifiedWithinHorizon"
    REFUTED = "RefutedAtHorizon"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Horizon:
    k_max: int | None
    depth: int | None
    tail_mass: Number


@dataclass
class Verdict:
    kind: VerdictKind
    horizon: Horizon
    details: dict = field(default_factory=dict)
    certificate: Any = None

    @property
    def certified(self) -> bool:
        return self.kind is VerdictKind.CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.kind is VerdictKind.REFUTED


def horizon_of(space: AtomicSpace, k_max: int | None) -> Horizon:
    return Horizon(k_max, space.n_atoms, space.tail_mass)


class Measured(NamedTuple):
    """The three quantities that must all stay below epsilon."""

    a_minus_b: Number
    preimage: Number
    c: Number


@dataclass(frozen=True)
class TransitivityCertificate:
    epsilon: Number
    A: MeasurableSet | None
    B: MeasurableSet
    k: int
    C: MeasurableSet
    measured: Measured
    C_has_tail: bool = False


@dataclass(frozen=True)
class MixingCertificate:
    epsilon: Number
    A: MeasurableSet | None
    k0: int
    per_k: tuple  # TransitivityCertificate for k0, k0+1, ..., k_max


@dataclass(frozen=True)
class RunAwayCertificate:
    epsilon: Number
    B: MeasurableSet
    k: int
    mu_complement: Number


def a_minus_b_mass(space: AtomicSpace, A: MeasurableSet | None, B: MeasurableSet) -> Number:
    if A is None:
        return space.measure(space.everything() - B) + space.tail_mass
    return space.measure(A - B)


def measure_a2(space: AtomicSpace, fk: AtomMap, A: MeasurableSet | None, B: MeasurableSet):
    """Measure ``(mu(A\\B), mu(f^{-k}B), mu(hull f^k B))`` with tail charges.

    Returns the measurements, the hull C and whether C needs the tail.
    """
    b_atoms = space.atoms_of(B)
    pre = space.atom_mass(preimage_atoms(fk, b_atoms))
    if touches_open(fk, b_atoms):
        pre = pre + space.tail_mass
    img, exited = image_atoms(fk, b_atoms)
    C = space.hull(img)
    c = space.measure(C) + (space.tail_mass if exited else 0)
    return Measured(a_minus_b_mass(space, A, B), pre, c), C, exited


def make_transitivity_certificate(
    space: AtomicSpace, f: AtomMap, epsilon: Number, A: MeasurableSet | None, B: MeasurableSet, k: int
) -> TransitivityCertificate:
    """Package ``(B, k)`` with ``C = hull(f^k(B))``; no validity check."""
    measured, C, exited = measure_a2(space, iterate(f, k), A, B)
    return TransitivityCertificate(epsilon, A, B, k, C, measured, exited)


class VerifyReport(NamedTuple):
    valid: bool
    failures: tuple
    measured: Measured


def verify_transitivity(space: AtomicSpace, f: AtomMap, cert: TransitivityCertificate) -> VerifyReport:
    """Re-check every clause of a transitivity certificate."""
    failures = []
    eps = cert.epsilon
    if not eps > 0:
        failures.append("epsilon must be positive")
    if cert.k < 1:
        failures.append("k must be >= 1")
    pull = pullback_sigma_algebra_equals(space, f)
    if not pull.equal:
        failures.append(f"pullback sigma-algebra differs: {pull.reason}")
    if cert.A is not None and not cert.B <= cert.A:
        failures.append("B is not contained in A")
    fk = iterate(f, max(cert.k, 1))
    b_atoms = space.atoms_of(cert.B)
    img, exited = image_atoms(fk, b_atoms)
    if not space.hull(img) <= cert.C:
        failures.append("f^k(B) is not contained in C")
    if exited and not cert.C_has_tail:
        failures.append("f^k(B) leaves the window but C does not contain the tail")
    pre = space.atom_mass(preimage_atoms(fk, b_atoms))
    if touches_open(fk, b_atoms):
        pre = pre + space.tail_mass
    c = space.measure(cert.C) + (space.tail_mass if cert.C_has_tail else 0)
    measured = Measured(a_minus_b_mass(space, cert.A, cert.B), pre, c)
    for name, value in zip(("mu(A\\B)", "mu(f^-k(B))", "mu(C)"), measured):
        if not strictly_less(value, eps):
            failures.append(f"{name} = {value} is not < {eps}")
    if not all(close(x, y) for x, y in zip(measured, cert.measured)):
        failures.append("recorded measurements disagree with recomputation")
    return VerifyReport(not failures, tuple(failures), measured)


def verify_mixing(space: AtomicSpace, f: AtomMap, cert: MixingCertificate) -> VerifyReport:
    failures = []
    expected_k = cert.k0
    last = Measured(0, 0, 0)
    for entry in cert.per_k:
        if entry.k != expected_k:
            failures.append(f"missing k = {expected_k}")
            break
        if entry.epsilon != cert.epsilon or entry.A != cert.A:
            failures.append(f"entry k = {entry.k} uses a different epsilon or A")
        report = verify_transitivity(space, f, entry)
        last = report.measured
        failures.extend(f"k = {entry.k}: {msg}" for msg in report.failures)
        expected_k += 1
    return VerifyReport(not failures, tuple(failures), last)


def runaway_complement_mass(space: AtomicSpace, B: MeasurableSet) -> Number:
    return space.window_mass - space.measure(B) + space.tail_mass


def verify_runaway(space: AtomicSpace, f: AtomMap, cert: RunAwayCertificate) -> VerifyReport:
    """Check ``mu(X\\B) < epsilon`` and ``B`` disjoint from ``f^k(B)``.

    Images beyond the window cannot meet ``B``, which lives inside it.
    """
    failures = []
    fk = iterate(f, cert.k)
    b_atoms = space.atoms_of(cert.B)
    img, _ = image_atoms(fk, b_atoms)
    if not img.isdisjoint(b_atoms):
        failures.append("B meets f^k(B)")
    mass = runaway_complement_mass(space, cert.B)
    if not strictly_less(mass, cert.epsilon):
        failures.append(f"mu(X\\B) = {mass} is not < {cert.epsilon}")
    if not close(mass, cert.mu_complement):
        failures.append("recorded mu(X\\B) disagrees with recomputation")
    return VerifyReport(not failures, tuple(failures), Measured(mass, 0, 0))


def runaway_to_transitivity(
    space: AtomicSpace, f: AtomMap, cert: RunAwayCertificate
) -> TransitivityCertificate:
    """Turn a run-away witness into a transitivity witness with ``A = X`` and
    ``C = hull(f^k(B))``."""
    return make_transitivity_certificate(space, f, cert.epsilon, None, cert.B, cert.k)
