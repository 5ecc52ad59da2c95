"""Run-away sets: exact search at a fixed k, and the liminf variants.

``B`` runs away at step ``k`` when ``B`` and ``f^k(B)`` are disjoint. On the
block quotient this is an independent set in the graph ``b -> f^k(b)``, which
for injective maps is a disjoint union of paths and cycles, so the heaviest
run-away set is computed exactly by dynamic programming.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..dynamics import AtomMap, block_map, decompose, image_atoms, iterate
from ..errors import NotInjective
from ..measure import AtomicSpace, MeasurableSet, Number, is_exact, strictly_less
from ..mwis import decomposition_mwis
from .certificates import (
    RunAwayCertificate,
    Verdict,
    VerdictKind,
    horizon_of,
    runaway_complement_mass,
    verify_runaway,
)


@dataclass(frozen=True)
class RunAwayResult:
    k: int
    epsilon: Number
    max_mass: Number
    B: MeasurableSet
    exact: bool
    window_mass: Number
    tail_mass: Number
    kind: VerdictKind
    certificate: RunAwayCertificate | None

    @property
    def complement_mass(self) -> Number:
        return self.window_mass - self.max_mass + self.tail_mass


def _block_images(space: AtomicSpace, fk: AtomMap) -> list[frozenset]:
    return [space.hull(image_atoms(fk, atoms)[0]).block_ids for atoms in space.blocks]


def greedy_runaway(space: AtomicSpace, fk: AtomMap) -> MeasurableSet:
    """Heaviest-first independent set; used when the block graph branches."""
    images = _block_images(space, fk)
    into: dict[int, set] = {}
    for b, targets in enumerate(images):
        for t in targets:
            into.setdefault(t, set()).add(b)
    chosen: set[int] = set()
    for b in sorted(range(space.n_blocks), key=lambda b: (-space.block_mass[b], b)):
        if b in images[b]:
            continue
        if images[b] & chosen or into.get(b, set()) & chosen:
            continue
        chosen.add(b)
    return MeasurableSet(frozenset(chosen))


def _at_least(a: Number, b: Number) -> bool:
    if is_exact(a) and is_exact(b):
        return a >= b
    return a >= b + 1e-12


def search_runaway_exact(space: AtomicSpace, f: AtomMap, epsilon: Number, k: int) -> RunAwayResult:
    """Heaviest measurable ``B`` with ``B`` disjoint from ``f^k(B)``.

    Certified iff ``mu(X) - max_mass < epsilon`` (tail included). Refuted iff
    the optimum is exact and ``max_mass <= mu(window) - epsilon``: no
    measurable set inside the window does better, and the tail only adds to
    ``mu(X \\ B)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    fk = iterate(f, k)
    try:
        q_space, q_map = block_map(space, fk)
        max_mass, chosen = decomposition_mwis(decompose(q_map), q_space.weights)
        B = MeasurableSet(chosen)
        exact = True
    except NotInjective:
        B = greedy_runaway(space, fk)
        max_mass = space.measure(B)
        exact = False
    window = space.window_mass
    complement = runaway_complement_mass(space, B)
    cert = None
    if strictly_less(complement, epsilon):
        candidate = RunAwayCertificate(epsilon, B, k, complement)
        if verify_runaway(space, f, candidate).valid:
            cert = candidate
    if cert is not None:
        kind = VerdictKind.CERTIFIED
    elif exact and _at_least(window - max_mass, epsilon):
        kind = VerdictKind.REFUTED
    else:
        kind = VerdictKind.INCONCLUSIVE
    return RunAwayResult(k, epsilon, max_mass, B, exact, window, space.tail_mass, kind, cert)


def runaway_sweep(space: AtomicSpace, f: AtomMap, epsilon: Number, k_max: int) -> list[RunAwayResult]:
    return [search_runaway_exact(space, f, epsilon, k) for k in range(1, k_max + 1)]


def check_c3_c4(
    space: AtomicSpace,
    f: AtomMap,
    epsilon: Number,
    k_max: int,
    tol: float = 1e-9,
    levels: int = 10,
) -> Verdict:
    """Build ``B`` as an intersection of run-away sets and report liminf proxies.

    Level ``j`` asks for a run-away set ``B_j`` with ``mu(X \\ B_j) < epsilon / 2^j``;
    then ``mu(X \\ B) < epsilon`` for ``B = B_1 & B_2 & ...``. Levels stop early
    once the tail alone exhausts the budget. The proxies are
    ``min_k mu(B & f^k B)`` (intersection) and ``min_k mu(f^k B)`` (image), each over
    ``k <= k_max`` with the tail charged when ``f^k(B)`` leaves the window.
    Certified when the intersection proxy is at most ``tol``.
    """
    if not space.is_finite:
        raise ValueError("the liminf criteria need a finite-measure space")
    horizon = horizon_of(space, k_max)
    chosen: list[RunAwayResult] = []
    for j in range(1, levels + 1):
        budget = epsilon / 2**j if is_exact(epsilon) else float(epsilon) / 2**j
        if not strictly_less(space.tail_mass, budget):
            break
        sweep = runaway_sweep(space, f, budget, k_max)
        hit = next((r for r in sweep if r.certificate is not None), None)
        if hit is None:
            if j == 1 and all(r.kind is VerdictKind.REFUTED for r in sweep):
                return Verdict(
                    VerdictKind.REFUTED,
                    horizon,
                    {"reason": f"no run-away set at epsilon/2 for any k <= {k_max}", "exact": True},
                )
            break
        chosen.append(hit)
    if not chosen:
        return Verdict(VerdictKind.INCONCLUSIVE, horizon, {"reason": "no level produced a run-away set"})
    B = chosen[0].B
    for r in chosen[1:]:
        B = B & r.B
    b_atoms = space.atoms_of(B)
    c3, c4 = [], []
    for k in range(1, k_max + 1):
        img, exited = image_atoms(iterate(f, k), b_atoms)
        charge = space.tail_mass if exited else Fraction(0)
        c3.append(space.atom_mass(img & b_atoms))
        c4.append(space.atom_mass(img) + charge)
    complement = runaway_complement_mass(space, B)
    details = {
        "levels": len(chosen),
        "level_k": [r.k for r in chosen],
        "B": B,
        "mu_complement": complement,
        "intersection_proxy": min(c3),
        "image_proxy": min(c4),
        "tol": tol,
    }
    if strictly_less(complement, epsilon) and min(c3) <= tol:
        return Verdict(VerdictKind.CERTIFIED, horizon, details)
    return Verdict(VerdictKind.INCONCLUSIVE, horizon, details)
