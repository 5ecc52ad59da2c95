"""Piecewise-monotone maps on an interval (or the real line) with Lebesgue measure.

Sets are finite unions of intervals, handled symbolically. Affine pieces
keep exact rational endpoints. Logarithmic pieces switch the whole system to
outward-rounded interval arithmetic (mpmath ``iv``), so every mass is
reported as a rigorous enclosure ``(lower, upper)``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from mpmath import iv

from ..dynamics import EXIT, AtomMap
from ..measure import AtomicSpace, Number

#: decimal digits for interval evaluation
IV_DPS = 50


@contextmanager
def _precision(dps: int = IV_DPS) -> Iterator[None]:
    saved = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = saved


def _iv(x):
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        return iv.mpf(x)
    return x


def lower(x) -> float:
    return float(x) if isinstance(x, (int, Fraction)) else float(x.a)


def upper(x) -> float:
    return float(x) if isinstance(x, (int, Fraction)) else float(x.b)


@dataclass(frozen=True)
class Piece:
    """``x -> a x + b`` (``kind="affine"``, ``a > 0``) or ``x -> log(1 + x)`` on ``[lo, hi)``."""

    lo: Fraction
    hi: Fraction
    kind: str = "affine"
    a: Fraction = Fraction(1)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("lo", "hi", "a", "b"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.kind not in ("affine", "log1p"):
            raise ValueError(f"unknown piece kind {self.kind!r}")
        if not self.lo < self.hi:
            raise ValueError("empty piece domain")
        if self.kind == "affine" and self.a <= 0:
            raise ValueError("affine pieces must be increasing")
        if self.kind == "log1p" and self.lo <= -1:
            raise ValueError("log(1 + x) needs x > -1")

    @property
    def exact(self) -> bool:
        return self.kind == "affine"

    def __call__(self, x):
        if self.kind == "affine":
            return self.a * x + self.b if isinstance(x, (int, Fraction)) else _iv(self.a) * x + _iv(self.b)
        return iv.log(1 + _iv(x))

    def inverse(self, y):
        if self.kind == "affine":
            return (y - self.b) / self.a if isinstance(y, (int, Fraction)) else (y - _iv(self.b)) / _iv(self.a)
        return iv.exp(_iv(y)) - 1

    def derivative_bounds(self) -> tuple[Fraction, Fraction]:
        """Exact inf and sup of the derivative over the piece."""
        if self.kind == "affine":
            return self.a, self.a
        return 1 / (1 + self.hi), 1 / (1 + self.lo)


@dataclass(frozen=True)
class IntervalSystem:
    """``ambient="interval"``: X is the union of the piece domains.

    ``ambient="line"``: X is the real line, the single affine piece acts on all
    of it and ``window`` is the half-width of the viewport ``[-window, window]``.
    """

    pieces: tuple
    ambient: str = "interval"
    window: Fraction | None = None
    name: str = ""
    wandering_seed: tuple | None = None

    def __post_init__(self):
        pieces = tuple(sorted(self.pieces, key=lambda p: p.lo))
        if not pieces:
            raise ValueError("no pieces")
        if self.ambient == "interval":
            for left, right in zip(pieces, pieces[1:]):
                if left.hi != right.lo:
                    raise ValueError("piece domains must tile an interval")
        elif self.ambient == "line":
            if len(pieces) != 1 or pieces[0].kind != "affine":
                raise ValueError("line systems take one affine piece")
            if self.window is None or Fraction(self.window) <= 0:
                raise ValueError("line systems need a positive window")
            object.__setattr__(self, "window", Fraction(self.window))
        else:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        object.__setattr__(self, "pieces", pieces)
        if self.wandering_seed is not None:
            object.__setattr__(self, "wandering_seed", tuple(Fraction(v) for v in self.wandering_seed))

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.pieces)

    @property
    def domain(self) -> tuple:
        if self.ambient == "line":
            return (-self.window, self.window)
        return (self.pieces[0].lo, self.pieces[-1].hi)

    def __call__(self, x):
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return p(x)
        if x == self.pieces[-1].hi:
            return self.pieces[-1](x)
        raise ValueError(f"{x} lies outside the domain")


def measure_of(intervals: Sequence[tuple]):
    """Sum of lengths; the intervals are assumed pairwise disjoint."""
    values = [v for pair in intervals for v in pair]
    if all(isinstance(v, (int, Fraction)) for v in values):
        return sum((Fraction(hi) - Fraction(lo) for lo, hi in intervals), Fraction(0))
    total = iv.mpf(0)
    for lo, hi in intervals:
        total = total + (_iv(hi) - _iv(lo))
    return total


def _merge(intervals: list) -> list:
    """Sort and merge overlapping exact intervals; interval-arithmetic ones are kept apart."""
    if not intervals:
        return []
    if not all(isinstance(v, Fraction) for pair in intervals for v in pair):
        return sorted(intervals, key=lambda t: lower(t[0]))
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def image_of(sys: IntervalSystem, intervals: Sequence[tuple]) -> list:
    """``f`` of a union of intervals (increasing pieces map ``[u, v)`` to ``[f(u), f(v))``)."""
    if sys.ambient == "line":
        p = sys.pieces[0]
        return [(p(lo), p(hi)) for lo, hi in intervals]
    out = []
    for lo, hi in intervals:
        for p in sys.pieces:
            u = lo if _ge(lo, p.lo) else p.lo
            v = hi if _le(hi, p.hi) else p.hi
            if _lt(u, v):
                out.append((p(u), p(v)))
    return _merge(out)


def preimage_of(sys: IntervalSystem, intervals: Sequence[tuple]) -> list:
    """``f^-1`` of a union of intervals (exact systems only)."""
    out = []
    for lo, hi in intervals:
        for p in sys.pieces:
            ilo, ihi = p(p.lo), p(p.hi)
            u = lo if _ge(lo, ilo) else ilo
            v = hi if _le(hi, ihi) else ihi
            if _lt(u, v):
                out.append((p.inverse(u), p.inverse(v)))
    return _merge(out)


def _mid(x) -> float:
    return (lower(x) + upper(x)) / 2


def _lt(x, y) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x < y
    return _mid(x) < _mid(y)


def _ge(x, y) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x >= y
    return _mid(x) >= _mid(y)


def _le(x, y) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x <= y
    return _mid(x) <= _mid(y)


def difference(a: Sequence[tuple], b: Sequence[tuple]) -> list:
    """``a \\ b`` for exact interval unions (endpoints ignored: mod null sets)."""
    out = []
    for lo, hi in a:
        pieces = [(lo, hi)]
        for blo, bhi in b:
            nxt = []
            for u, v in pieces:
                if bhi <= u or blo >= v:
                    nxt.append((u, v))
                    continue
                if u < blo:
                    nxt.append((u, blo))
                if bhi < v:
                    nxt.append((bhi, v))
            pieces = nxt
        out.extend(pieces)
    return _merge(out)


def lipschitz_constants(sys: IntervalSystem) -> tuple[Fraction, Fraction]:
    """``(c1, c2)`` with ``c1 mu(B) <= mu(f(B)) <= c2 mu(B)``.

    ``c2`` is the sup of the derivative. ``c1`` is the inf of the derivative
    divided by the largest number of pieces whose images overlap.
    """
    lo = min(p.derivative_bounds()[0] for p in sys.pieces)
    hi = max(p.derivative_bounds()[1] for p in sys.pieces)
    return lo / _max_multiplicity(sys), hi


def _piece_images(sys: IntervalSystem) -> list:
    if sys.ambient == "line":
        return [(-math.inf, math.inf)]
    with _precision():
        return [(p(p.lo), p(p.hi)) for p in sys.pieces]


def _max_multiplicity(sys: IntervalSystem) -> int:
    images = _piece_images(sys)
    best = 1
    for i, (u, v) in enumerate(images):
        count = 1 + sum(
            1 for j, (s, t) in enumerate(images) if j != i and min(upper(v), upper(t)) - max(lower(u), lower(s)) > 0
        )
        best = max(best, count)
    return best


@dataclass(frozen=True)
class InjectivityReport:
    essentially_injective: bool
    witness: tuple | None  # (A, B) disjoint intervals with f(A) = f(B)


def essential_injectivity(sys: IntervalSystem) -> InjectivityReport:
    """Two pieces whose images overlap in positive measure give disjoint
    ``A``, ``B`` with ``f(A) = f(B)``; monotone pieces are injective."""
    if sys.ambient == "line":
        return InjectivityReport(True, None)
    with _precision():
        images = _piece_images(sys)
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                (u, v), (s, t) = images[i], images[j]
                lo_o = u if lower(u) >= lower(s) else s
                hi_o = v if upper(v) <= upper(t) else t
                if lower(hi_o) - upper(lo_o) > 0:
                    pi, pj = sys.pieces[i], sys.pieces[j]
                    A = (pi.inverse(lo_o), pi.inverse(hi_o))
                    B = (pj.inverse(lo_o), pj.inverse(hi_o))
                    return InjectivityReport(False, (A, B))
    return InjectivityReport(True, None)


@dataclass
class IntervalReport:
    c1: Fraction
    c2: Fraction
    contraction: bool
    injective: bool
    wandering: list
    image_masses: list  # mu(f^k(X)) for k = 0..k_max (enclosures when inexact)
    lambda_bounds: tuple  # enclosure of mu(Lambda), Lambda = intersection of f^k(X)
    dissipative: bool | None
    verdict: str
    notes: list = field(default_factory=list)

    @property
    def lambda_mass(self):
        return self.lambda_bounds[1]


def _fixed_point_bound(sys: IntervalSystem, t: Fraction) -> bool:
    """True if ``f`` has no fixed point in ``[lo + t, hi]`` for a single
    increasing piece fixing ``lo`` with derivative at most 1.

    Then ``g(x) = x - f(x)`` is nondecreasing, so ``g(lo + t) > 0`` suffices.
    """
    if len(sys.pieces) != 1 or sys.ambient != "interval":
        return False
    p = sys.pieces[0]
    if p.derivative_bounds()[1] > 1:
        return False
    with _precision():
        f_lo = p(p.lo)
        if not (lower(f_lo) == upper(f_lo) == float(p.lo)):
            return False
        x = p.lo + t
        g = _iv(x) - p(x) if not p.exact else x - p(x)
        return lower(g) > 0


def interval_analyze(sys: IntervalSystem, k_max: int = 60, tol: float = 1e-10) -> IntervalReport:
    c1, c2 = lipschitz_constants(sys)
    inj = essential_injectivity(sys)
    notes = []
    if sys.ambient == "line":
        # f(R) = R: every image of the line is the line, Lambda = R
        w = sys.window
        masses = [2 * w] * (k_max + 1)
        notes.append("f is a bijection of the real line; Lambda is the whole line (infinite measure)")
        verdict = "E2" if c2 < 1 else "not-a-contraction"
        return IntervalReport(c1, c2, c2 < 1, True, [], masses, (math.inf, math.inf), None, verdict, notes)

    with _precision():
        X = [sys.domain]
        images = [X]
        for _ in range(k_max):
            images.append(image_of(sys, images[-1]))
        masses = [measure_of(s) for s in images]
        wandering = difference(X, images[1]) if sys.exact else _inexact_wandering(sys)

        lam_hi = upper(masses[-1]) if not sys.exact else masses[-1]
        lam_lo: Number = 0
        if sys.exact and k_max >= 2 and masses[-1] == masses[-2]:
            lam_lo = masses[-1]
            notes.append(f"image masses are stationary from k = {_stationary_from(masses)}: Lambda = f^k(X) mod null")
        half_tol = Fraction(tol) / 2
        if _fixed_point_bound(sys, half_tol):
            lam_hi = min(lam_hi, half_tol) if sys.exact else min(lam_hi, float(half_tol))
            notes.append("no fixed point above lo + tol/2 and f^k(X) = [lo, f^k(hi)] decreases: Lambda-mass <= tol/2")

        dissipative = _dissipative(sys, wandering, masses, lam_hi, k_max, tol, inj.essentially_injective, notes)

    contraction = c2 < 1
    if not inj.essentially_injective:
        verdict = "not-essentially-injective"
        notes.append("f(A) = f(B) for disjoint A, B of positive measure: T_f is not transitive")
    elif contraction:
        if lam_hi < tol:
            verdict = "E1"
        elif lam_lo and lam_lo >= tol:
            verdict = "E2"
        else:
            verdict = "undetermined"
    else:
        verdict = "dissipative" if dissipative else "not-a-contraction"
    return IntervalReport(c1, c2, contraction, inj.essentially_injective, wandering, masses, (lam_lo, lam_hi),
                          dissipative, verdict, notes)


def _stationary_from(masses: list) -> int:
    k = len(masses) - 1
    while k > 0 and masses[k - 1] == masses[-1]:
        k -= 1
    return k


def _inexact_wandering(sys: IntervalSystem) -> list:
    """``X \\ f(X)`` for a single increasing piece fixing its left end: ``(f(hi), hi]``."""
    if len(sys.pieces) != 1:
        raise NotImplementedError("wandering sets of multi-piece inexact systems")
    p = sys.pieces[0]
    return [(p(p.hi), _iv(p.hi))]


def _dissipative(sys, wandering, masses, lam_hi, k_max, tol, injective, notes) -> bool | None:
    if not injective:
        return None
    total_mass = masses[0]
    if wandering:
        # f^j(W) = f^j(X) \ f^{j+1}(X) are disjoint; what is left after k_max steps
        # is mu(f^k_max(X)) - mu(Lambda) >= lower(mu(f^k_max X)) - lam_hi
        orbit, current = [], wandering
        for _ in range(k_max):
            orbit.extend(current)
            current = image_of(sys, current)
        swept = measure_of(orbit)
        remaining = max(0.0, lower(masses[-1]) - float(lam_hi)) if not sys.exact else max(Fraction(0), masses[-1] - lam_hi)
        covered = lower(swept) + float(remaining) if not sys.exact else swept + remaining
        notes.append(f"wandering orbit covers {float(covered):.12g} of {float(total_mass):.12g}")
        return covered >= (total_mass - Fraction(tol) if sys.exact else float(total_mass) - tol)
    if sys.wandering_seed is not None and sys.exact:
        seed = [tuple(sys.wandering_seed)]
        orbit = [seed[0]]
        fwd, back = seed, seed
        for _ in range(k_max):
            fwd = image_of(sys, fwd)
            back = preimage_of(sys, back)
            orbit.extend(fwd)
            orbit.extend(back)
        orbit.sort()
        if any(orbit[i][1] > orbit[i + 1][0] for i in range(len(orbit) - 1)):
            notes.append("the two-sided orbit of the wandering seed overlaps itself")
            return False
        covered = measure_of(orbit)
        notes.append(f"two-sided orbit of the seed covers {float(covered):.12g} of {float(total_mass):.12g}")
        return covered >= total_mass - Fraction(tol)
    return False


def wandering_partition(sys: IntervalSystem, n: int) -> tuple[AtomicSpace, AtomMap]:
    """Atoms ``f^j(W)``, ``j < n``, for ``W = X \\ f(X)`` a single interval.

    ``f`` shifts ``f^j(W)`` onto ``f^{j+1}(W)`` and the last atom exits.
    The tail is ``mu(f^n(X))``. Inexact systems get float midpoint weights.
    """
    report = interval_analyze(sys, k_max=1)
    if not report.injective or len(report.wandering) != 1:
        raise ValueError("needs an injective system whose wandering set is one interval")
    with _precision():
        current = report.wandering
        weights = []
        for _ in range(n):
            m = measure_of(current)
            weights.append(m if sys.exact else (lower(m) + upper(m)) / 2)
            current = image_of(sys, current)
        X = [sys.domain]
        for _ in range(n):
            X = image_of(sys, X)
        tail = measure_of(X) if sys.exact else upper(measure_of(X))
    space = AtomicSpace.from_weights(weights, tail_mass=tail, name=f"wandering:{sys.name}")
    forward = tuple(j + 1 if j + 1 < n else EXIT for j in range(n))
    return space, AtomMap(forward, sys.name or "f")


NAMED_SYSTEMS = {
    "halving": lambda: IntervalSystem((Piece(0, 1, a=Fraction(1, 2)),), name="halving"),
    "halving-line": lambda: IntervalSystem((Piece(-1, 1, a=Fraction(1, 2)),), "line", Fraction(1), "halving-line"),
    "log1p": lambda: IntervalSystem((Piece(0, 1, "log1p"),), name="log1p"),
    "piecewise": lambda: IntervalSystem(
        (Piece(0, Fraction(1, 2), a=Fraction(1, 2)), Piece(Fraction(1, 2), 1, a=Fraction(3, 2), b=Fraction(-1, 2))),
        name="piecewise",
        wandering_seed=(Fraction(1, 4), Fraction(1, 2)),
    ),
    "folding": lambda: IntervalSystem(
        (Piece(0, Fraction(1, 2), a=Fraction(1, 2)), Piece(Fraction(1, 2), 1, a=Fraction(1, 2), b=Fraction(-1, 4))),
        name="folding",
    ),
}


def parse_interval_system(text: str) -> IntervalSystem:
    """A named system, or pieces ``affine(lo,hi,a,b);log1p(lo,hi)``."""
    text = text.strip()
    if text in NAMED_SYSTEMS:
        return NAMED_SYSTEMS[text]()
    pieces = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        head, _, rest = chunk.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"malformed piece {chunk!r}")
        args = [Fraction(v) for v in rest[:-1].split(",")]
        if head == "affine" and len(args) == 4:
            pieces.append(Piece(args[0], args[1], "affine", args[2], args[3]))
        elif head == "log1p" and len(args) == 2:
            pieces.append(Piece(args[0], args[1], "log1p"))
        else:
            raise ValueError(f"malformed piece {chunk!r}")
    if not pieces:
        raise ValueError(f"unknown interval system {text!r}; known: {', '.join(NAMED_SYSTEMS)}")
    return IntervalSystem(tuple(pieces), name=text)
