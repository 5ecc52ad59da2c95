"""Searching for transitivity and mixing certificates.

For each k three routes are tried in order:

1. a greedy pass that drops the costliest blocks of A until the three epsilon
   budgets hold (sound, never refutes);
2. exhaustive enumeration of the subsets of A when A has few blocks (exact:
   certifies or refutes; C = hull(f^k B) is the cheapest admissible C);
3. for A = X on a block-injective finite system, the exact run-away optimum:
   any transitivity witness (B, C) at epsilon yields the run-away set B \\ C at
   2 * epsilon, so a run-away optimum below ``mu(X) - 2 * epsilon`` refutes k.

Only a failed sigma-algebra test refutes transitivity outright. Mixing is
refuted within the horizon when some exactly refuted k lies at or beyond
every admissible k0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ..dynamics import (
    AtomMap,
    image_atoms,
    iterates,
    preimage_atoms,
    pullback_sigma_algebra_equals,
    touches_open,
)
from ..measure import AtomicSpace, MeasurableSet, Number, is_exact, strictly_less
from .certificates import (
    MixingCertificate,
    TransitivityCertificate,
    Verdict,
    VerdictKind,
    horizon_of,
    make_transitivity_certificate,
    runaway_to_transitivity,
    verify_mixing,
    verify_transitivity,
)
from .runaway import search_runaway_exact

#: subsets of A are enumerated exhaustively up to this many blocks
EXACT_BLOCK_LIMIT = 12


@dataclass(frozen=True)
class _BlockProfile:
    block: int
    mass: Number
    pre: Number
    opened: bool
    exited: bool
    hull: frozenset


def _profiles(space: AtomicSpace, fk: AtomMap, a_blocks) -> list[_BlockProfile]:
    out = []
    for b in a_blocks:
        atoms = space.blocks[b]
        img, exited = image_atoms(fk, atoms)
        out.append(
            _BlockProfile(
                b,
                space.block_mass[b],
                space.atom_mass(preimage_atoms(fk, atoms)),
                touches_open(fk, atoms),
                exited,
                space.hull(img).block_ids,
            )
        )
    return out


def _a_blocks(space: AtomicSpace, A: MeasurableSet | None) -> list[int]:
    return sorted(space.everything().block_ids if A is None else A.block_ids)


def greedy_a2(
    space: AtomicSpace, fk: AtomMap, epsilon: Number, A: MeasurableSet | None
) -> MeasurableSet | None:
    """Drop blocks of A by descending cost (ties: lower block index first)
    until the budgets hold. Cost = preimage mass + image-hull mass, tail
    charges included."""
    tail = space.tail_mass
    profiles = _profiles(space, fk, _a_blocks(space, A))

    def cost(pr: _BlockProfile):
        c = pr.pre + _hull_mass(space, pr.hull)
        if pr.opened or pr.exited:
            c = c + tail
        return c

    order = sorted(profiles, key=lambda pr: (-cost(pr), pr.block))
    kept = {pr.block for pr in profiles}
    outside = tail if A is None else Fraction(0)
    pre_total = sum((pr.pre for pr in profiles), Fraction(0))
    n_open = sum(pr.opened for pr in profiles)
    n_exit = sum(pr.exited for pr in profiles)
    hull_count: dict[int, int] = {}
    for pr in profiles:
        for h in pr.hull:
            hull_count[h] = hull_count.get(h, 0) + 1
    c_total = _hull_mass(space, hull_count)

    def holds() -> bool:
        pre = pre_total + (tail if n_open else 0)
        c = c_total + (tail if n_exit else 0)
        return strictly_less(outside, epsilon) and strictly_less(pre, epsilon) and strictly_less(c, epsilon)

    for pr in [None, *order]:
        if pr is not None:
            kept.discard(pr.block)
            outside += pr.mass
            pre_total -= pr.pre
            n_open -= pr.opened
            n_exit -= pr.exited
            for h in pr.hull:
                hull_count[h] -= 1
                if hull_count[h] == 0:
                    del hull_count[h]
                    c_total -= space.block_mass[h]
        if not strictly_less(outside, epsilon):
            return None
        if holds():
            return MeasurableSet(frozenset(kept))
    return None


def _hull_mass(space: AtomicSpace, blocks) -> Number:
    return sum((space.block_mass[h] for h in blocks), Fraction(0))


def exhaustive_a2(
    space: AtomicSpace, fk: AtomMap, epsilon: Number, A: MeasurableSet | None
) -> tuple[MeasurableSet | None, bool]:
    """Try every ``B`` inside a small ``A``.

    Returns ``(B, refuted)``: a witness with tail charges, or ``refuted=True``
    when even the tail-free lower bounds fail for every subset.
    """
    a_blocks = _a_blocks(space, A)
    if len(a_blocks) > EXACT_BLOCK_LIMIT:
        raise ValueError("A is too large for enumeration")
    tail = space.tail_mass
    profiles = _profiles(space, fk, a_blocks)
    total_a = sum((pr.mass for pr in profiles), Fraction(0))
    base_outside = tail if A is None else Fraction(0)
    refuted = True
    # largest subsets first, so a witness keeps as much of A as possible
    masks = sorted(range(1 << len(profiles)), key=lambda m: (-bin(m).count("1"), m))
    for mask in masks:
        chosen = [pr for i, pr in enumerate(profiles) if mask >> i & 1]
        kept_mass = sum((pr.mass for pr in chosen), Fraction(0))
        outside_lo = total_a - kept_mass
        pre_lo = sum((pr.pre for pr in chosen), Fraction(0))
        hull = set().union(*(pr.hull for pr in chosen)) if chosen else set()
        c_lo = _hull_mass(space, hull)
        if not (strictly_less(outside_lo, epsilon) or _fuzzy(outside_lo)):
            continue
        if _lt_or_fuzzy(outside_lo, epsilon) and _lt_or_fuzzy(pre_lo, epsilon) and _lt_or_fuzzy(c_lo, epsilon):
            refuted = False
        outside = outside_lo + base_outside
        pre = pre_lo + (tail if any(pr.opened for pr in chosen) else 0)
        c = c_lo + (tail if any(pr.exited for pr in chosen) else 0)
        if strictly_less(outside, epsilon) and strictly_less(pre, epsilon) and strictly_less(c, epsilon):
            return MeasurableSet(frozenset(pr.block for pr in chosen)), False
    return None, refuted


def _fuzzy(x) -> bool:
    return not is_exact(x)


def _lt_or_fuzzy(a, b) -> bool:
    # lower bounds only refute when the comparison is decided exactly
    if is_exact(a) and is_exact(b):
        return a < b
    return a < b + 1e-12


class KOutcome(NamedTuple):
    k: int
    status: str  # "certified", "refuted" or "unknown"
    certificate: TransitivityCertificate | None
    route: str


def decide_k(
    space: AtomicSpace,
    f: AtomMap,
    fk: AtomMap,
    k: int,
    epsilon: Number,
    A: MeasurableSet | None,
) -> KOutcome:
    """Look for a transitivity witness at this k; refute exactly when possible."""
    B = greedy_a2(space, fk, epsilon, A)
    if B is not None:
        return KOutcome(k, "certified", make_transitivity_certificate(space, f, epsilon, A, B, k), "greedy")
    a_blocks = _a_blocks(space, A)
    if len(a_blocks) <= EXACT_BLOCK_LIMIT:
        B, refuted = exhaustive_a2(space, fk, epsilon, A)
        if B is not None:
            cert = make_transitivity_certificate(space, f, epsilon, A, B, k)
            return KOutcome(k, "certified", cert, "exhaustive")
        return KOutcome(k, "refuted" if refuted else "unknown", None, "exhaustive")
    whole = A is None or A == space.everything()
    if whole and space.is_finite:
        result = search_runaway_exact(space, f, epsilon, k)
        if result.certificate is not None:
            cert = runaway_to_transitivity(space, f, result.certificate)
            if A is not None:
                cert = make_transitivity_certificate(space, f, epsilon, A, cert.B, k)
            if verify_transitivity(space, f, cert).valid:
                return KOutcome(k, "certified", cert, "runaway")
        if result.exact and _refutes_a2(space, result.max_mass, epsilon, A):
            return KOutcome(k, "refuted", None, "runaway")
    return KOutcome(k, "unknown", None, "greedy")


def _refutes_a2(space: AtomicSpace, max_mass: Number, epsilon: Number, A) -> bool:
    # every transitivity witness B leaves the run-away set B \ C with mu(X \ (B \ C)) < 2 eps;
    # for A = window only the window part of X \ B is controlled
    gap = space.window_mass - max_mass
    budget = 2 * epsilon
    if is_exact(gap) and is_exact(budget):
        return gap >= budget
    return gap >= budget + 1e-12


def _pullback_refutation(space, f, k_max) -> Verdict | None:
    pull = pullback_sigma_algebra_equals(space, f)
    if pull.equal:
        return None
    return Verdict(
        VerdictKind.REFUTED,
        horizon_of(space, k_max),
        {"reason": "f^-1(B) != B", "witness_block": pull.witness, "detail": pull.reason, "exact": True},
    )


def search_transitivity(
    space: AtomicSpace, f: AtomMap, epsilon: Number, A: MeasurableSet | None, k_max: int
) -> Verdict:
    """First k <= k_max with a verified transitivity certificate.

    Refuted only when ``f^-1(B) != B``; a fruitless search is Inconclusive,
    even when every individual k was refuted exactly.
    """
    refusal = _pullback_refutation(space, f, k_max)
    if refusal is not None:
        return refusal
    refuted_ks = []
    for k, fk in iterates(f, k_max):
        outcome = decide_k(space, f, fk, k, epsilon, A)
        if outcome.status == "certified":
            report = verify_transitivity(space, f, outcome.certificate)
            if report.valid:
                return Verdict(
                    VerdictKind.CERTIFIED,
                    horizon_of(space, k_max),
                    {"k": k, "route": outcome.route, "measured": report.measured},
                    outcome.certificate,
                )
        elif outcome.status == "refuted":
            refuted_ks.append(k)
    return Verdict(
        VerdictKind.INCONCLUSIVE,
        horizon_of(space, k_max),
        {"budget": f"no verified certificate for k <= {k_max}", "exactly_refuted_k": refuted_ks},
    )


def search_mixing(
    space: AtomicSpace,
    f: AtomMap,
    epsilon: Number,
    A: MeasurableSet | None,
    k0_max: int,
    k_max: int,
) -> Verdict:
    """Smallest k0 <= k0_max such that every k in [k0, k_max] is certified."""
    if k0_max > k_max:
        raise ValueError("k0_max must not exceed k_max")
    refusal = _pullback_refutation(space, f, k_max)
    if refusal is not None:
        return refusal
    outcomes: list[KOutcome] = []
    for k, fk in iterates(f, k_max):
        outcome = decide_k(space, f, fk, k, epsilon, A)
        if outcome.status == "certified" and not verify_transitivity(space, f, outcome.certificate).valid:
            outcome = KOutcome(k, "unknown", None, outcome.route)
        outcomes.append(outcome)
    status = [o.status for o in outcomes]
    k0 = None
    for cand in range(k_max, 0, -1):
        if status[cand - 1] != "certified":
            break
        k0 = cand
    refuted_ks = [o.k for o in outcomes if o.status == "refuted"]
    details = {
        "per_k_status": status,
        "exactly_refuted_k": refuted_ks,
        "smallest_certified_tail_start": k0,
    }
    horizon = horizon_of(space, k_max)
    if k0 is not None and k0 <= k0_max:
        cert = MixingCertificate(epsilon, A, k0, tuple(o.certificate for o in outcomes[k0 - 1 :]))
        report = verify_mixing(space, f, cert)
        if report.valid:
            details["k0"] = k0
            return Verdict(VerdictKind.CERTIFIED, horizon, details, cert)
    if any(k >= k0_max for k in refuted_ks):
        details["obstruction_k"] = [k for k in refuted_ks if k >= k0_max]
        return Verdict(VerdictKind.REFUTED, horizon, details)
    return Verdict(VerdictKind.INCONCLUSIVE, horizon, details)
