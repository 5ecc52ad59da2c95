"""The constructive step behind transitivity: from a certificate ``(B, k, C)``
build ``phi`` close to ``psi1`` whose ``k``-th iterate ``phi o f^k`` is close
to ``psi2``.

Write ``psi2 = sum_j b_j 1_{B_j}`` over its support blocks. For every ``j`` a
measurable ``C_j`` with ``f^{-k}(C_j) = B_j & B`` is solved from the fibres,
and

    phi = psi1 on B \\ U C_j,   phi = b_j on C_j,   phi = 0 elsewhere.

Both errors are then computed exactly in ``l^p`` rather than bounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .criteria.certificates import TransitivityCertificate
from .dynamics import EXIT, AtomMap, iterate, preimage_atoms, pullback_sigma_algebra_equals
from .errors import BudgetTooLoose, ExitEncountered, NonMeasurableSet, NoSolvablePullback
from .measure import AtomicSpace, MeasurableSet, Number, SimpleFunction, h4_epsilon, is_exact, rational_or_float


@dataclass(frozen=True)
class ApproximationRequest:
    psi1: SimpleFunction
    psi2: SimpleFunction
    eta: Number
    p: Number = 1

    @property
    def M(self) -> Number:
        return max(self.psi1.sup_norm, self.psi2.sup_norm)


@dataclass(frozen=True)
class PhiConstruction:
    phi: SimpleFunction
    k: int
    err1_pow: Number  # ||phi - psi1||_p ** p
    err2_pow: Number  # ||phi o f^k - psi2||_p ** p
    tail_charge: Number
    pieces: tuple  # (b_j, C_j block ids) per support block of psi2

    @property
    def p(self) -> Number:
        return self.phi.p

    @property
    def err1(self) -> float:
        return _root(self.err1_pow, self.p)

    @property
    def err2(self) -> float:
        return _root(self.err2_pow, self.p)

    def within(self, eta: Number) -> bool:
        """``err1 < eta`` and ``err2 < eta``, decided on the p-th powers."""
        bound = _power(rational_or_float(eta), self.p)
        return self.err1_pow < bound and self.err2_pow < bound


def _power(x: Number, p: Number) -> Number:
    if is_exact(x) and isinstance(p, int):
        return x**p
    return float(x) ** float(p)


def _root(x: Number, p: Number) -> float:
    return float(x) if p == 1 else float(x) ** (1.0 / float(p))


def pullback_values(space: AtomicSpace, fk: AtomMap, phi: SimpleFunction) -> list:
    """Atom values of ``phi o f^k``; atoms leaving the window read zero."""
    values = phi.as_dict()
    out = []
    for a in range(space.n_atoms):
        t = fk.forward[a]
        out.append(Fraction(0) if t == EXIT else values.get(space.block_of[t], Fraction(0)))
    return out


def _atom_error_pow(space: AtomicSpace, values: list, target: SimpleFunction, p: Number) -> Number:
    tv = target.as_dict()
    total: Number = Fraction(0)
    for a, v in enumerate(values):
        diff = abs(v - tv.get(space.block_of[a], Fraction(0)))
        if diff:
            total += _power(diff, p) * space.weights[a]
    return total


def _solve_cj(space: AtomicSpace, fk: AtomMap, target_blocks: frozenset) -> frozenset:
    """Blocks ``C`` with ``f^{-k}(C)`` exactly the atoms of ``target_blocks``."""
    target_atoms = space.atoms_of(MeasurableSet(target_blocks))
    for a in target_atoms:
        if fk.forward[a] == EXIT:
            raise NoSolvablePullback(f"atom {a} of the target leaves the window under f^k")
    candidates = {space.block_of[fk.forward[a]] for a in target_atoms}
    chosen = set()
    for beta in candidates:
        pre = preimage_atoms(fk, space.blocks[beta])
        if pre <= target_atoms:
            chosen.add(beta)
    covered = preimage_atoms(fk, [a for beta in chosen for a in space.blocks[beta]])
    if covered != target_atoms:
        missing = sorted(target_atoms - covered)[:8]
        raise NoSolvablePullback(f"atoms {missing} are not the full k-step preimage of any measurable set")
    return frozenset(chosen)


def construct_phi(
    space: AtomicSpace,
    f: AtomMap,
    req: ApproximationRequest,
    cert: TransitivityCertificate,
) -> PhiConstruction:
    p = req.p
    if req.psi1.p != p or req.psi2.p != p:
        raise ValueError("psi1, psi2 and the request must share the exponent p")
    if cert.A is not None:
        for name, psi in (("psi1", req.psi1), ("psi2", req.psi2)):
            if not psi.support <= cert.A:
                raise ValueError(f"{name} is not supported in A")
    M = req.M
    if M > 0:
        limit = h4_epsilon(req.eta, M, p)
        if cert.epsilon > limit:
            raise BudgetTooLoose(f"certificate epsilon {cert.epsilon} exceeds the threshold {limit}")
    if not pullback_sigma_algebra_equals(space, f).equal:
        raise NoSolvablePullback("f^-1 of the sigma-algebra is strictly coarser")
    fk = iterate(f, cert.k)

    values: dict[int, Number] = {b: v for b, v in req.psi1.values if b in cert.B}
    pieces = []
    solved = {}
    for b_j, value in req.psi2.values:
        if b_j not in cert.B:
            continue
        solved[b_j] = (_solve_cj(space, fk, frozenset({b_j})), value)
    for C_j, _ in solved.values():
        for beta in C_j:
            values.pop(beta, None)
    for b_j, (C_j, value) in sorted(solved.items()):
        for beta in C_j:
            values[beta] = value
        pieces.append((value, tuple(sorted(C_j))))
    phi = SimpleFunction(values, p)

    err1_pow = _atom_error_pow(space, [phi(space.block_of[a]) for a in range(space.n_atoms)], req.psi1, p)
    pulled = pullback_values(space, fk, phi)
    err2_pow = _atom_error_pow(space, pulled, req.psi2, p)
    # phi on atoms with preimages beyond the window makes phi o f^k nonzero there
    tail_charge: Number = Fraction(0)
    if any(space.block_of[a] in phi.support for a in fk.open_atoms):
        tail_charge = _power(phi.sup_norm, p) * space.tail_mass
    return PhiConstruction(phi, cert.k, err1_pow, err2_pow + tail_charge, tail_charge, tuple(pieces))


def compose_function(space: AtomicSpace, f: AtomMap, phi: SimpleFunction) -> SimpleFunction:
    """``phi o f`` as a block-constant function."""
    if any(space.block_of[a] in phi.support for a in f.open_atoms):
        raise ExitEncountered("phi o f has support beyond the window")
    values = pullback_values(space, f, phi)
    out = {}
    for b, atoms in enumerate(space.blocks):
        vals = {values[a] for a in atoms}
        if len(vals) > 1:
            raise NonMeasurableSet(f"phi o f is not constant on block {b}")
        v = vals.pop()
        if v:
            out[b] = v
    return SimpleFunction(out, phi.p)


def orbit_segment(space: AtomicSpace, f: AtomMap, phi: SimpleFunction, n: int) -> list[SimpleFunction]:
    """``[phi, phi o f, ..., phi o f^n]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    orbit = [phi]
    for _ in range(n):
        orbit.append(compose_function(space, f, orbit[-1]))
    return orbit
