"""The nonsingular odometer on ``prod A_i`` truncated to the first ``m`` digits.

``A_i = {0, 1}`` for even ``i`` and ``{0, ..., 2i - 1}`` for odd ``i``. The
digit measures are uniform on even digits; on odd digits the low half
``{0..i-1}`` carries ``1 - 2^-i`` and the high half carries ``2^-i``.
Atoms are cylinders ``[x_1, ..., x_m]``, indexed in mixed radix with ``x_1``
least significant, so the adding machine is ``n -> n + 1 mod L_m``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Sequence

from ..dynamics import AtomMap
from ..measure import AtomicSpace


def alphabet_size(i: int) -> int:
    if i < 1:
        raise ValueError("digits are numbered from 1")
    return 2 if i % 2 == 0 else 2 * i


def digit_mass(i: int, j: int) -> Fraction:
    size = alphabet_size(i)
    if not 0 <= j < size:
        raise ValueError(f"digit {j} is not in A_{i}")
    if i % 2 == 0:
        return Fraction(1, 2)
    if j < i:
        return (1 - Fraction(1, 2**i)) / i
    return Fraction(1, 2**i) / i


def cycle_length(m: int) -> int:
    """``L_m = |A_1| * ... * |A_m|``."""
    return prod(alphabet_size(i) for i in range(1, m + 1))


def cylinder_mass(x: Sequence[int]) -> Fraction:
    return prod((digit_mass(i, xi) for i, xi in enumerate(x, start=1)), start=Fraction(1))


def digits_of(n: int, m: int) -> tuple[int, ...]:
    out = []
    for i in range(1, m + 1):
        n, r = divmod(n, alphabet_size(i))
        out.append(r)
    return tuple(out)


def index_of(x: Sequence[int]) -> int:
    n, base = 0, 1
    for i, xi in enumerate(x, start=1):
        n += xi * base
        base *= alphabet_size(i)
    return n


def first_free_digit(x: Sequence[int]) -> int | None:
    """``l(x)``: first position whose digit is below its maximum, or None."""
    for i, xi in enumerate(x, start=1):
        if xi < alphabet_size(i) - 1:
            return i
    return None


def odometer_step(x: Sequence[int]) -> tuple[int, ...]:
    """Adding machine on the truncated cylinder; the all-max word wraps to zero."""
    ell = first_free_digit(x)
    if ell is None:
        return tuple(0 for _ in x)
    return tuple(0 if i < ell else (xi + 1 if i == ell else xi) for i, xi in enumerate(x, start=1))


@lru_cache(maxsize=16)
def build_odometer(m: int) -> tuple[AtomicSpace, AtomMap]:
    """Depth-``m`` cylinders with exact product weights and the cyclic map.

    The all-max cylinder ``x*`` is the only atom where the truncation differs
    from the infinite system (its carry would move to digit ``m + 1``);
    ``wrap_atom`` names it.
    """
    if m < 1:
        raise ValueError("depth must be >= 1")
    L = cycle_length(m)
    labels = [digits_of(n, m) for n in range(L)]
    weights = [cylinder_mass(x) for x in labels]
    space = AtomicSpace.from_weights(weights, labels=labels, name=f"odometer:{m}")
    return space, AtomMap(tuple((n + 1) % L for n in range(L)), "odometer")


def wrap_atom(m: int) -> int:
    return cycle_length(m) - 1


def digit_set(space: AtomicSpace, i: int, digits) -> frozenset:
    """Atoms whose ``i``-th digit lies in ``digits``."""
    digits = set(digits)
    return frozenset(a for a, x in enumerate(space.labels) if x[i - 1] in digits)


def rn_derivative(x: Sequence[int]) -> Fraction:
    """``d(mu o f)/d(mu)`` on the cylinder ``[x_1..x_m]``.

    With ``k = l(x)`` the infinite product collapses to
    ``mu_k(x_k + 1) / mu_k(x_k) * prod_{i<k} mu_i(0) / mu_i(max A_i)``.
    """
    k = first_free_digit(x)
    if k is None:
        raise ValueError("the carry leaves the given digits; extend the prefix")
    value = digit_mass(k, x[k - 1] + 1) / digit_mass(k, x[k - 1])
    for i in range(1, k):
        value *= digit_mass(i, 0) / digit_mass(i, alphabet_size(i) - 1)
    return value


def rn_table(m: int) -> list[tuple[tuple[int, ...], Fraction]]:
    """RN derivative at every depth-``m`` cylinder except the wrap atom."""
    sizes = [range(alphabet_size(i)) for i in range(1, m + 1)]
    out = []
    for rev in product(*reversed(sizes)):
        x = tuple(reversed(rev))
        if first_free_digit(x) is not None:
            out.append((x, rn_derivative(x)))
    return out
