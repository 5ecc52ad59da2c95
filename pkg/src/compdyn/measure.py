"""Atomic measure spaces with a partition sigma-algebra, simple functions and
the L^p admissibility constants.

A space is a finite window of atoms carved out of a countable measure space.
Whatever mass lies outside the window is declared up front as ``tail_mass``
(``math.inf`` for infinite-measure spaces); it is never estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import NonMeasurableSet

Number = Union[int, Fraction, float]

#: comparison slack used whenever a floating weight is involved
FLOAT_TOL = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def strictly_less(a: Number, b: Number) -> bool:
    """``a < b``, exact for rationals and conservative by FLOAT_TOL otherwise."""
    if is_exact(a) and is_exact(b):
        return a < b
    if math.isinf(b) and b > 0:
        return not (isinstance(a, float) and math.isinf(a))
    return a < b - FLOAT_TOL


def close(a: Number, b: Number, tol: float = FLOAT_TOL) -> bool:
    if a == b or (is_exact(a) and is_exact(b)):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def to_number(x) -> Number:
    """Parse ``"num/den"`` and decimal strings exactly; floats pass through."""
    if isinstance(x, str):
        x = x.strip()
        if x.lower() in ("inf", "infinity"):
            return math.inf
        return Fraction(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not measures")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return float(x)


def rational_or_float(x: Number) -> Number:
    if isinstance(x, int):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class MeasurableSet:
    """A union of blocks, identified by block index."""

    block_ids: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.block_ids, frozenset):
            object.__setattr__(self, "block_ids", frozenset(self.block_ids))

    @classmethod
    def of(cls, *ids: int) -> MeasurableSet:
        return cls(frozenset(ids))

    def __or__(self, other: MeasurableSet) -> MeasurableSet:
        return MeasurableSet(self.block_ids | other.block_ids)

    def __and__(self, other: MeasurableSet) -> MeasurableSet:
        return MeasurableSet(self.block_ids & other.block_ids)

    def __sub__(self, other: MeasurableSet) -> MeasurableSet:
        return MeasurableSet(self.block_ids - other.block_ids)

    def __le__(self, other: MeasurableSet) -> bool:
        return self.block_ids <= other.block_ids

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.block_ids))

    def __len__(self) -> int:
        return len(self.block_ids)

    def __contains__(self, block: int) -> bool:
        return block in self.block_ids

    def __bool__(self) -> bool:
        return bool(self.block_ids)

    def isdisjoint(self, other: MeasurableSet) -> bool:
        return self.block_ids.isdisjoint(other.block_ids)


EMPTY = MeasurableSet()


@dataclass(frozen=True)
class AtomicSpace:
    """Finitely truncated atomic measure space.

    ``weights[a]`` is the mass of atom ``a``; ``blocks`` partitions the atoms
    into the generators of the sigma-algebra. ``labels`` optionally names the
    atoms in model coordinates (integers on Z, digit tuples for odometers).
    """

    weights: tuple
    blocks: tuple
    tail_mass: Number = Fraction(0)
    labels: tuple | None = None
    name: str = ""
    block_of: tuple = field(init=False, repr=False, compare=False)
    block_mass: tuple = field(init=False, repr=False, compare=False)
    _label_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weights = tuple(rational_or_float(w) for w in self.weights)
        blocks = tuple(tuple(int(a) for a in b) for b in self.blocks)
        n = len(weights)
        for a, w in enumerate(weights):
            if not (w > 0) or (isinstance(w, float) and not math.isfinite(w)):
                raise ValueError(f"weight of atom {a} must be positive and finite, got {w!r}")
        owner = [-1] * n
        for i, b in enumerate(blocks):
            if not b:
                raise ValueError(f"block {i} is empty")
            for a in b:
                if not 0 <= a < n:
                    raise ValueError(f"block {i} names atom {a} outside 0..{n - 1}")
                if owner[a] != -1:
                    raise ValueError(f"atom {a} lies in blocks {owner[a]} and {i}")
                owner[a] = i
        if -1 in owner:
            raise ValueError(f"atom {owner.index(-1)} is not covered by any block")
        tail = rational_or_float(self.tail_mass)
        if tail < 0:
            raise ValueError("tail_mass must be nonnegative")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels must name every atom")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "tail_mass", tail)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "block_of", tuple(owner))
        object.__setattr__(
            self, "block_mass", tuple(_sum(weights[a] for a in b) for b in blocks)
        )
        index = {lab: a for a, lab in enumerate(self.labels)} if self.labels else {}
        object.__setattr__(self, "_label_index", index)

    @classmethod
    def from_weights(cls, weights: Sequence[Number], blocks=None, **kw) -> AtomicSpace:
        """Space with singleton blocks unless ``blocks`` is given."""
        if blocks is None:
            blocks = tuple((a,) for a in range(len(weights)))
        return cls(tuple(weights), tuple(blocks), **kw)

    @property
    def n_atoms(self) -> int:
        return len(self.weights)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def window_mass(self) -> Number:
        return _sum(self.weights)

    @property
    def total_mass(self) -> Number:
        return self.window_mass + self.tail_mass

    @property
    def is_finite(self) -> bool:
        return not (isinstance(self.tail_mass, float) and math.isinf(self.tail_mass))

    @property
    def exact(self) -> bool:
        return all(is_exact(w) for w in self.weights) and is_exact(self.tail_mass)

    def atom(self, label) -> int:
        """Atom index for a model label."""
        return self._label_index[label]

    def label(self, atom: int):
        return self.labels[atom] if self.labels else atom

    def everything(self) -> MeasurableSet:
        return MeasurableSet(frozenset(range(self.n_blocks)))

    def complement(self, s: MeasurableSet) -> MeasurableSet:
        return self.everything() - s

    def atoms_of(self, s: MeasurableSet) -> frozenset:
        return frozenset(a for b in s.block_ids for a in self.blocks[b])

    def hull(self, atoms: Iterable[int]) -> MeasurableSet:
        """Smallest measurable set containing the atoms."""
        return MeasurableSet(frozenset(self.block_of[a] for a in atoms))

    def set_from_atoms(self, atoms: Iterable[int]) -> MeasurableSet:
        atoms = frozenset(atoms)
        hull = self.hull(atoms)
        if sum(len(self.blocks[b]) for b in hull.block_ids) != len(atoms):
            raise NonMeasurableSet(f"atom set {sorted(atoms)[:8]}... is not a union of blocks")
        return hull

    def is_measurable(self, atoms: Iterable[int]) -> bool:
        atoms = frozenset(atoms)
        return sum(len(self.blocks[b]) for b in self.hull(atoms).block_ids) == len(atoms)

    def block_set(self, *labels) -> MeasurableSet:
        """Measurable set of the blocks containing the labelled atoms."""
        return self.hull(self.atom(lab) for lab in labels)

    def measure(self, s: MeasurableSet) -> Number:
        return _sum(self.block_mass[b] for b in s.block_ids)

    def atom_mass(self, atoms: Iterable[int]) -> Number:
        return _sum(self.weights[a] for a in atoms)


def _sum(values: Iterable[Number]) -> Number:
    total: Number = Fraction(0)
    floats = []
    for v in values:
        if isinstance(v, float):
            floats.append(v)
        else:
            total += v
    if floats:
        return math.fsum(floats) + float(total)
    return total


def measure(space: AtomicSpace, s: MeasurableSet) -> Number:
    """Mass of a measurable subset of the window."""
    return space.measure(s)


@dataclass(frozen=True)
class SimpleFunction:
    """Block-constant, finitely supported function, viewed in L^p.

    Zero values are dropped so that equal functions compare equal.
    """

    values: tuple = ()
    p: Number = 1

    def __post_init__(self):
        items = self.values.items() if isinstance(self.values, Mapping) else self.values
        cleaned = tuple(sorted((int(b), rational_or_float(v)) for b, v in items if v != 0))
        if len({b for b, _ in cleaned}) != len(cleaned):
            raise ValueError("a block carries two values")
        if self.p < 1:
            raise ValueError(f"exponent p must be >= 1, got {self.p}")
        object.__setattr__(self, "values", cleaned)

    @classmethod
    def indicator(cls, s: MeasurableSet, p: Number = 1, c: Number = 1) -> SimpleFunction:
        return cls({b: c for b in s.block_ids}, p)

    @classmethod
    def zero(cls, p: Number = 1) -> SimpleFunction:
        return cls((), p)

    def as_dict(self) -> dict:
        return dict(self.values)

    def __call__(self, block: int) -> Number:
        return self.as_dict().get(block, Fraction(0))

    @property
    def support(self) -> MeasurableSet:
        return MeasurableSet(frozenset(b for b, _ in self.values))

    @property
    def sup_norm(self) -> Number:
        return max((abs(v) for _, v in self.values), default=Fraction(0))

    def restrict(self, s: MeasurableSet) -> SimpleFunction:
        return SimpleFunction(tuple((b, v) for b, v in self.values if b in s), self.p)

    def scale(self, c: Number) -> SimpleFunction:
        return SimpleFunction(tuple((b, c * v) for b, v in self.values), self.p)

    def __add__(self, other: SimpleFunction) -> SimpleFunction:
        d = self.as_dict()
        for b, v in other.values:
            d[b] = d.get(b, 0) + v
        return SimpleFunction(d, self.p)

    def __sub__(self, other: SimpleFunction) -> SimpleFunction:
        return self + other.scale(-1)


def lp_norm_pow(f: SimpleFunction, space: AtomicSpace) -> Number:
    """``||f||_p ** p``; exact when the values, weights and p are rational."""
    p = f.p
    return _sum(abs(v) ** p * space.block_mass[b] for b, v in f.values)


def lp_norm(f: SimpleFunction, space: AtomicSpace) -> Number:
    s = lp_norm_pow(f, space)
    if f.p == 1:
        return s
    return float(s) ** (1.0 / float(f.p))


def h3_delta(epsilon: Number, p: Number) -> Number:
    """Norm radius below which ``|psi| >= 1`` on S forces ``mu(S) <= epsilon/2``.

    In L^p this is Markov's inequality: mu(S) <= ||psi||^p.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    half = rational_or_float(epsilon) / 2
    if p == 1:
        return half
    return float(half) ** (1.0 / float(p))


def h4_epsilon(eta: Number, M: Number, p: Number) -> Number:
    """Measure threshold below which any ``|psi| <= 2M`` supported on S has
    norm below ``eta/2``: ``(eta/2)^p / (2M)^p``."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    eta, M = rational_or_float(eta), rational_or_float(M)
    if is_exact(eta) and is_exact(M) and isinstance(p, int):
        return (eta / 2) ** p / (2 * M) ** p
    return (float(eta) / 2) ** float(p) / (2 * float(M)) ** float(p)
