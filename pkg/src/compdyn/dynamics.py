"""Self-maps on atoms: preimages, images, iterates and functional graphs.

A map is given atom by atom. Atoms whose image leaves the truncation window
map to ``EXIT``; once outside, an orbit is assumed never to come back. Atoms
that may receive preimages from outside the window (the left edge of a
bilateral shift, say) are listed in ``open_atoms`` so that every backward
measurement can charge the declared tail mass for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .errors import ExitEncountered, NonMeasurablePreimage, NotInjective
from .measure import AtomicSpace, MeasurableSet, Number, rational_or_float

EXIT = -1


@dataclass(frozen=True)
class AtomMap:
    forward: tuple
    name: str = field(default="", compare=False)
    open_atoms: frozenset = frozenset()
    fibers: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        forward = tuple(int(t) for t in self.forward)
        n = len(forward)
        fibers = [[] for _ in range(n)]
        for a, t in enumerate(forward):
            if t == EXIT:
                continue
            if not 0 <= t < n:
                raise ValueError(f"atom {a} maps to {t}, outside 0..{n - 1}")
            fibers[t].append(a)
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "open_atoms", frozenset(self.open_atoms))
        object.__setattr__(self, "fibers", tuple(tuple(fb) for fb in fibers))

    def __call__(self, atom: int) -> int:
        return self.forward[atom]

    def __len__(self) -> int:
        return len(self.forward)

    @property
    def exits(self) -> frozenset:
        return frozenset(a for a, t in enumerate(self.forward) if t == EXIT)

    @property
    def is_injective(self) -> bool:
        return all(len(fb) <= 1 for fb in self.fibers)

    @classmethod
    def identity(cls, n: int, name: str = "identity") -> AtomMap:
        return cls(tuple(range(n)), name)


def compose(g: AtomMap, h: AtomMap, name: str | None = None) -> AtomMap:
    """``g o h``: apply h first. EXIT is absorbing."""
    if len(g) != len(h):
        raise ValueError("maps act on windows of different sizes")
    fwd = tuple(EXIT if t == EXIT else g.forward[t] for t in h.forward)
    leaked = {g.forward[b] for b in h.open_atoms} - {EXIT}
    return AtomMap(fwd, name if name is not None else f"{g.name}o{h.name}", g.open_atoms | leaked)


@lru_cache(maxsize=512)
def iterate(f: AtomMap, k: int) -> AtomMap:
    """``f^k`` by repeated squaring; ``k = 0`` gives the identity."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = k
    result = AtomMap.identity(len(f), f"{f.name}^0")
    base = f
    while k:
        if k & 1:
            result = compose(base, result, "")
        k >>= 1
        if k:
            base = compose(base, base, "")
    return AtomMap(result.forward, f"{f.name}^{n}", result.open_atoms)


def iterates(f: AtomMap, k_max: int) -> Iterator[tuple[int, AtomMap]]:
    """Yield ``(k, f^k)`` for k = 1..k_max, one composition per step."""
    g = f
    for k in range(1, k_max + 1):
        yield k, g
        if k < k_max:
            g = compose(f, g, f"{f.name}^{k + 1}")


def preimage_atoms(f: AtomMap, atoms: Iterable[int]) -> frozenset:
    return frozenset(a for t in atoms for a in f.fibers[t])


def image_atoms(f: AtomMap, atoms: Iterable[int]) -> tuple[frozenset, bool]:
    """Raw image of the atoms and whether any of them exits the window."""
    out, exited = set(), False
    for a in atoms:
        t = f.forward[a]
        if t == EXIT:
            exited = True
        else:
            out.add(t)
    return frozenset(out), exited


def preimage(space: AtomicSpace, f: AtomMap, s: MeasurableSet) -> MeasurableSet:
    atoms = preimage_atoms(f, space.atoms_of(s))
    if not space.is_measurable(atoms):
        raise NonMeasurablePreimage(
            f"preimage of blocks {sorted(s.block_ids)[:8]} under {f.name or 'f'} "
            "is not a union of blocks"
        )
    return space.hull(atoms)


def touches_open(f: AtomMap, atoms: Iterable[int]) -> bool:
    """True if some atom may have a preimage outside the window."""
    return not f.open_atoms.isdisjoint(atoms)


class ImageResult(NamedTuple):
    atoms: frozenset
    hull: MeasurableSet
    measurable: bool


def image(space: AtomicSpace, f: AtomMap, s: MeasurableSet) -> ImageResult:
    """Raw image, its measurable hull and whether the raw image is measurable."""
    atoms, exited = image_atoms(f, space.atoms_of(s))
    if exited:
        raise ExitEncountered(f"blocks {sorted(s.block_ids)[:8]} leave the window under {f.name or 'f'}")
    return ImageResult(atoms, space.hull(atoms), space.is_measurable(atoms))


class Boundedness(NamedTuple):
    c: Number
    op_norm: Number
    exit_mass: Number
    open_blocks: tuple


def boundedness_constant(space: AtomicSpace, f: AtomMap, p: Number = 1) -> Boundedness:
    """``c = max_b mu(f^{-1}(b)) / mu(b)`` over blocks; ``||T_f|| = c^{1/p}``.

    Fibres are taken inside the window. Blocks that may have preimages beyond
    it are listed in ``open_blocks``: their ratio is a lower estimate only.
    """
    c: Number = 0
    for b, atoms in enumerate(space.blocks):
        ratio = space.atom_mass(preimage_atoms(f, atoms)) / space.block_mass[b]
        if ratio > c:
            c = ratio
    c = rational_or_float(c)
    op_norm = c if p == 1 else float(c) ** (1.0 / float(p))
    exit_mass = space.atom_mass(f.exits)
    open_blocks = tuple(sorted(space.hull(f.open_atoms).block_ids))
    return Boundedness(c, op_norm, exit_mass, open_blocks)


class PullbackCheck(NamedTuple):
    equal: bool
    witness: int | None
    reason: str
    exit_blocks: tuple


def pullback_sigma_algebra_equals(space: AtomicSpace, f: AtomMap) -> PullbackCheck:
    """Decide ``f^{-1}(B) = B`` for the partition sigma-algebra.

    The pulled-back algebra is generated by the disjoint sets ``f^{-1}(b)``.
    It equals the original one iff every nonempty ``f^{-1}(b)`` is exactly one
    block. Blocks lying entirely on EXIT atoms are preimages of blocks beyond
    the window; they are reported, not judged.
    """
    exits = f.exits
    exit_blocks = tuple(b for b, atoms in enumerate(space.blocks) if all(a in exits for a in atoms))
    for b, atoms in enumerate(space.blocks):
        pre = preimage_atoms(f, atoms)
        if not pre:
            continue
        hull = space.hull(pre)
        if not space.is_measurable(pre):
            return PullbackCheck(False, b, f"f^-1 of block {b} is not measurable", exit_blocks)
        if len(hull) > 1:
            w = min(hull.block_ids)
            return PullbackCheck(
                False, w, f"block {w} is not a preimage: f^-1 of block {b} spans {len(hull)} blocks", exit_blocks
            )
    return PullbackCheck(True, None, "", exit_blocks)


def bimeasurability_probe(space: AtomicSpace, f: AtomMap) -> tuple:
    """Blocks whose forward image (inside the window) is not measurable."""
    bad = []
    for b, atoms in enumerate(space.blocks):
        img, exited = image_atoms(f, atoms)
        if not exited and not space.is_measurable(img):
            bad.append(b)
    return tuple(bad)


class Component(NamedTuple):
    kind: str  # "path" or "cycle"
    atoms: tuple


@dataclass(frozen=True)
class FunctionalGraphDecomposition:
    components: tuple

    def paths(self) -> list:
        return [c for c in self.components if c.kind == "path"]

    def cycles(self) -> list:
        return [c for c in self.components if c.kind == "cycle"]


def decompose(f: AtomMap, k: int = 1) -> FunctionalGraphDecomposition:
    """Split the graph ``a -> f^k(a)`` into simple paths and cycles.

    Paths run forward from in-degree-zero atoms until they exit; what is left
    lies on cycles. Requires in-degree at most one.
    """
    g = iterate(f, k) if k != 1 else f
    for t, fb in enumerate(g.fibers):
        if len(fb) > 1:
            raise NotInjective(f"atom {t} has {len(fb)} preimages under {f.name or 'f'}^{k}")
    seen = [False] * len(g)
    components = []
    for start in range(len(g)):
        if g.fibers[start] or seen[start]:
            continue
        path, a = [], start
        while a != EXIT and not seen[a]:
            seen[a] = True
            path.append(a)
            a = g.forward[a]
        components.append(Component("path", tuple(path)))
    for start in range(len(g)):
        if seen[start]:
            continue
        cycle, a = [], start
        while not seen[a]:
            seen[a] = True
            cycle.append(a)
            a = g.forward[a]
        components.append(Component("cycle", tuple(cycle)))
    return FunctionalGraphDecomposition(tuple(components))


def block_map(space: AtomicSpace, f: AtomMap) -> tuple[AtomicSpace, AtomMap]:
    """Quotient of ``f`` on blocks: one super-atom per block.

    A block maps to EXIT when all its atoms exit, otherwise to the single
    block its in-window image lies in. Atoms of one block exiting while the
    others stay count as conflict-free (their image is beyond the window).
    Raises NotInjective when a block's image meets two blocks.
    """
    fwd = []
    for b, atoms in enumerate(space.blocks):
        img, _ = image_atoms(f, atoms)
        targets = space.hull(img).block_ids
        if len(targets) > 1:
            raise NotInjective(f"block {b} maps into {len(targets)} blocks")
        fwd.append(next(iter(targets)) if targets else EXIT)
    quotient_space = AtomicSpace.from_weights(space.block_mass, tail_mass=space.tail_mass, name=space.name)
    open_blocks = space.hull(f.open_atoms).block_ids
    return quotient_space, AtomMap(tuple(fwd), f.name, open_blocks)
