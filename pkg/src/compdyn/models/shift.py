"""Weighted backward shifts ``i -> i + 1`` on weighted ``l^p`` windows."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from ..dynamics import EXIT, AtomMap
from ..measure import AtomicSpace, Number

NAMED = ("corollary32", "geometric", "constant")


@dataclass(frozen=True)
class WeightedShiftSpec:
    """``weights`` is a named formula or an explicit list for the window.

    Unilateral windows are ``0..horizon-1``; bilateral windows are
    ``-horizon..horizon-1`` and explicit lists must then have ``2 * horizon``
    entries starting at ``-horizon``.
    """

    side: str
    weights: Union[str, Sequence[Number]]
    horizon: int

    def __post_init__(self):
        if self.side not in ("unilateral", "bilateral"):
            raise ValueError(f"side must be unilateral or bilateral, got {self.side!r}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if isinstance(self.weights, str) and self.weights not in NAMED:
            raise ValueError(f"unknown weight formula {self.weights!r}; known: {', '.join(NAMED)}")
        if self.side == "bilateral" and self.weights == "corollary32":
            raise ValueError("the corollary32 weights live on the natural numbers")


def corollary32_weights(n_blocks: int) -> list[Fraction]:
    """Blocks ``V_1 .. V_n``: ``V_n`` runs ``1, 1/2, ..., 2^-n`` then back up to ``1/2``."""
    out: list[Fraction] = []
    for n in range(1, n_blocks + 1):
        out.extend(Fraction(1, 2**j) for j in range(n + 1))
        out.extend(Fraction(1, 2**j) for j in range(n - 1, 0, -1))
    return out


def corollary32_block_starts(n_blocks: int) -> list[int]:
    """Index of the first entry of each block ``V_n`` (``|V_n| = 2n``)."""
    starts, pos = [], 0
    for n in range(1, n_blocks + 1):
        starts.append(pos)
        pos += 2 * n
    return starts


def _corollary32_prefix(length: int) -> list[Fraction]:
    n = 1
    while n * (n + 1) < length:
        n += 1
    return corollary32_weights(n)[:length]


def shift_labels(spec: WeightedShiftSpec) -> list[int]:
    if spec.side == "unilateral":
        return list(range(spec.horizon))
    return list(range(-spec.horizon, spec.horizon))


def shift_weights(spec: WeightedShiftSpec) -> tuple[list[Number], Number]:
    """Window weights and the declared mass beyond the window."""
    labels = shift_labels(spec)
    w = spec.weights
    if not isinstance(w, str):
        weights = list(w)
        if len(weights) != len(labels):
            raise ValueError(f"expected {len(labels)} weights, got {len(weights)}")
        return weights, math.inf
    if w == "corollary32":
        return _corollary32_prefix(len(labels)), math.inf
    if w == "constant":
        return [Fraction(1)] * len(labels), math.inf
    weights = [Fraction(1, 2 ** abs(i)) for i in labels]
    h = spec.horizon
    if spec.side == "unilateral":
        return weights, Fraction(2, 2**h)
    # left tail sum_{i < -h} 2^i plus right tail sum_{i >= h} 2^-i
    return weights, Fraction(1, 2**h) + Fraction(2, 2**h)


def build_shift(spec: WeightedShiftSpec) -> tuple[AtomicSpace, AtomMap]:
    labels = shift_labels(spec)
    weights, tail = shift_weights(spec)
    n = len(labels)
    space = AtomicSpace.from_weights(weights, tail_mass=tail, labels=labels, name=f"shift:{spec.side}")
    forward = [a + 1 if a + 1 < n else EXIT for a in range(n)]
    opened = frozenset({0}) if spec.side == "bilateral" else frozenset()
    return space, AtomMap(tuple(forward), "sigma", opened)
