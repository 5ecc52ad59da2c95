"""A measurable, non-bimeasurable map on the integers.

The sigma-algebra is generated by ``{k}`` for ``k < 0`` and ``{2k, 2k+1}``
for ``k >= 0``, with ``mu({k}) = 2^k`` and ``mu({2k, 2k+1}) = 2^-k``. The map
sends ``-2 -> 0``, ``-1 -> 2``, ``n -> n + 4`` for ``n >= 0`` and
``n -> n + 1`` for ``n <= -3``; the image of the block ``{-2}`` is ``{0}``,
which is not measurable.
"""

from __future__ import annotations

from fractions import Fraction

from ..dynamics import EXIT, AtomMap
from ..measure import AtomicSpace


def partition_map(n: int) -> int:
    if n == -2:
        return 0
    if n == -1:
        return 2
    return n + 4 if n >= 0 else n + 1


def build_partition_example(n_range: int) -> tuple[AtomicSpace, AtomMap]:
    """Window ``[-n_range, 2 n_range)``.

    Each integer ``2k, 2k+1`` carries half of its block's mass. Tail mass is
    ``2^-n`` on the left plus ``2^(1-n)`` on the right. The left edge atom is
    open: its preimage ``-n_range - 1`` lies outside.
    """
    if n_range < 2:
        raise ValueError("n_range must be >= 2")
    labels = list(range(-n_range, 2 * n_range))
    index = {z: a for a, z in enumerate(labels)}
    weights, blocks = [], []
    for z in labels:
        weights.append(Fraction(2) ** z if z < 0 else Fraction(1, 2 ** (z // 2 + 1)))
    for z in range(-n_range, 0):
        blocks.append((index[z],))
    for k in range(n_range):
        blocks.append((index[2 * k], index[2 * k + 1]))
    tail = Fraction(1, 2**n_range) + Fraction(2, 2**n_range)
    space = AtomicSpace(tuple(weights), tuple(blocks), tail, labels, f"partition-z:{n_range}")
    forward = [index.get(partition_map(z), EXIT) for z in labels]
    return space, AtomMap(tuple(forward), "f", frozenset({index[-n_range]}))


def c_set(space: AtomicSpace, n: int):
    """``C_n = {2n, 2n+1, ...}`` inside the window."""
    return space.hull(a for a, z in enumerate(space.labels) if z >= 2 * n)


def d_set(space: AtomicSpace, n: int):
    """``D_n = {..., -2n-1, -2n}`` inside the window."""
    return space.hull(a for a, z in enumerate(space.labels) if z <= -2 * n)


def right_tail(n_range: int) -> Fraction:
    return Fraction(2, 2**n_range)


def left_tail(n_range: int) -> Fraction:
    return Fraction(1, 2**n_range)
