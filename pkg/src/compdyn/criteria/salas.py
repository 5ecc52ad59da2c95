"""Finite-window proxies for the weighted-shift criteria.

For ``T f = f o sigma`` with ``sigma(i) = i + 1`` on weighted ``l^p``:

* unilateral transitivity iff ``liminf nu_i = 0``;
* bilateral transitivity iff some increasing ``n_k`` has
  ``nu_{i+n_k} -> 0`` and ``nu_{i-n_k} -> 0`` for every ``i``;
* mixing iff ``nu_i -> 0`` as ``|i| -> oo``.

A window can only show a pattern, so the verdicts here are pattern verdicts:
Certified when the proxy falls below ``tol`` and Refuted when it never moves
off its starting value.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..measure import Number, rational_or_float
from .certificates import Horizon, Verdict, VerdictKind


def _prepare(weights: Sequence[Number], horizon: int | None) -> list:
    nu = [rational_or_float(w) for w in (weights if horizon is None else weights[:horizon])]
    if not nu:
        raise ValueError("no weights in the window")
    for i, w in enumerate(nu):
        if not w > 0:
            raise ValueError(f"weight {i} must be positive, got {w!r}")
    return nu


def boundedness_ratio(nu: Sequence[Number]) -> Number:
    """``max nu_i / nu_{i+1}`` on the window: the norm of the shift to the power p."""
    if len(nu) < 2:
        return 0
    return max(nu[i] / nu[i + 1] for i in range(len(nu) - 1))


def _checkpoints(n: int, checkpoints) -> list[int]:
    if checkpoints is None:
        checkpoints = [n * j // 10 for j in range(10)]
    out = sorted({c for c in checkpoints if 0 <= c < n})
    if not out:
        raise ValueError("no checkpoint lies inside the window")
    return out


def _suffix(nu, op) -> list:
    out = list(nu)
    for i in range(len(nu) - 2, -1, -1):
        out[i] = op(nu[i], out[i + 1])
    return out


def _pattern_verdict(values: list, tol: float) -> VerdictKind:
    if values[-1] < tol:
        return VerdictKind.CERTIFIED
    if all(v == values[0] for v in values) and values[0] >= tol:
        return VerdictKind.REFUTED
    return VerdictKind.INCONCLUSIVE


def salas_unilateral(
    weights: Sequence[Number], horizon: int | None = None, tol: float = 1e-5, checkpoints=None
) -> Verdict:
    """liminf proxy: ``min_{j >= c} nu_j`` at each checkpoint ``c``.

    ``prefix_min`` records ``min_{j < c} nu_j``, the running minimum reached
    before each checkpoint.
    """
    nu = _prepare(weights, horizon)
    cps = _checkpoints(len(nu), checkpoints)
    tail_min = _suffix(nu, min)
    prefix_min = [min(nu[:c]) if c else None for c in cps]
    proxy = [tail_min[c] for c in cps]
    details = {
        "checkpoints": cps,
        "tail_min": proxy,
        "prefix_min": prefix_min,
        "boundedness_ratio": boundedness_ratio(nu),
        "tol": tol,
    }
    return Verdict(_pattern_verdict(proxy, tol), Horizon(None, len(nu), None), details)


def salas_mixing(
    weights: Sequence[Number], horizon: int | None = None, tol: float = 1e-5, checkpoints=None
) -> Verdict:
    """Limit proxy: ``max_{j >= c} nu_j`` at each checkpoint ``c``.

    For a bilateral window pass the weights reordered by ``|i|`` if both
    ends matter; the proxy only looks forward.
    """
    nu = _prepare(weights, horizon)
    cps = _checkpoints(len(nu), checkpoints)
    tail_sup = _suffix(nu, max)
    proxy = [tail_sup[c] for c in cps]
    details = {
        "checkpoints": cps,
        "tail_sup": proxy,
        "boundedness_ratio": boundedness_ratio(nu),
        "tol": tol,
    }
    return Verdict(_pattern_verdict(proxy, tol), Horizon(None, len(nu), None), details)


def salas_bilateral(
    weights: Sequence[Number], origin: int, horizon: int | None = None, tol: float = 1e-5
) -> Verdict:
    """Greedy extraction of ``n_1 < n_2 < ...``.

    ``weights[origin]`` is ``nu_0``. At level ``t`` the next ``n`` is the
    smallest one beyond the previous such that every ``|i| <= t`` has
    ``nu_{i+n}`` and ``nu_{i-n}`` inside the window and below ``2^-t``.
    Certified when every level down to ``2^-t <= tol`` finds its ``n``.
    """
    nu = _prepare(weights, horizon)
    if not 0 <= origin < len(nu):
        raise ValueError("origin lies outside the window")
    levels = max(1, math.ceil(math.log2(1 / tol)))
    sequence: list[int] = []
    prev = 0
    for t in range(1, levels + 1):
        bound = 2.0**-t
        found = None
        for n in range(prev + 1, len(nu)):
            lo, hi = origin - t - n, origin + t + n
            if lo < 0 or hi >= len(nu):
                break
            if all(max(nu[origin + i + n], nu[origin + i - n]) < bound for i in range(-t, t + 1)):
                found = n
                break
        if found is None:
            break
        sequence.append(found)
        prev = found
    details = {
        "n_k": sequence,
        "levels_reached": len(sequence),
        "levels_needed": levels,
        "boundedness_ratio": boundedness_ratio(nu),
        "tol": tol,
    }
    if len(sequence) == levels:
        kind = VerdictKind.CERTIFIED
    elif not sequence:
        kind = VerdictKind.REFUTED
    else:
        kind = VerdictKind.INCONCLUSIVE
    return Verdict(kind, Horizon(None, len(nu), None), details)
