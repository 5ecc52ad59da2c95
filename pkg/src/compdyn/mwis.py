"""Exact maximum-weight independent sets on paths and cycles.

Weights may be Fractions; the arithmetic stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .dynamics import FunctionalGraphDecomposition
from .measure import Number


def path_mwis(weights: Sequence[Number]) -> tuple[Number, list[int]]:
    """Best independent set of a path whose consecutive vertices conflict.

    Returns the weight and the chosen positions along the path.
    """
    n = len(weights)
    if n == 0:
        return Fraction(0), []
    # best[i]: optimum over the first i vertices
    best = [Fraction(0)] * (n + 1)
    best[1] = weights[0]
    for i in range(2, n + 1):
        best[i] = max(best[i - 1], best[i - 2] + weights[i - 1])
    chosen = []
    i = n
    while i >= 1:
        if i == 1 or best[i] != best[i - 1]:
            chosen.append(i - 1)
            i -= 2
        else:
            i -= 1
    chosen.reverse()
    return best[n], chosen


def cycle_mwis(weights: Sequence[Number]) -> tuple[Number, list[int]]:
    """Best independent set of a directed cycle ``v0 -> v1 -> ... -> v0``.

    A 1-cycle is a self-loop and admits nothing.
    """
    n = len(weights)
    if n <= 1:
        return Fraction(0), []
    if n == 2:
        i = 0 if weights[0] >= weights[1] else 1
        return weights[i], [i]
    drop_first, chosen_a = path_mwis(weights[1:])
    drop_last, chosen_b = path_mwis(weights[:-1])
    if drop_first >= drop_last:
        return drop_first, [i + 1 for i in chosen_a]
    return drop_last, chosen_b


def decomposition_mwis(
    decomposition: FunctionalGraphDecomposition, weights: Sequence[Number]
) -> tuple[Number, frozenset]:
    """Solve every component and return the total weight and chosen vertices."""
    total: Number = Fraction(0)
    chosen = set()
    for comp in decomposition.components:
        w = [weights[a] for a in comp.atoms]
        solver = path_mwis if comp.kind == "path" else cycle_mwis
        value, picks = solver(w)
        total += value
        chosen.update(comp.atoms[i] for i in picks)
    return total, frozenset(chosen)
