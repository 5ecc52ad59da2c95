"""Disk automorphisms ``z -> e^{i theta} (z - a) / (1 - conj(a) z)`` and their
boundary dynamics on arcs.

Boundary sets are finite unions of arcs. An arc is ``(start, length)`` in
turns (normalized Lebesgue measure: the full circle has length 1), running
counterclockwise. Möbius maps send arcs to arcs with the same orientation, so
images and preimages only need the two endpoints. Endpoints are evaluated
with mpmath at a working precision that grows with the iterate, since
hyperbolic maps contract arcs geometrically.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp, mpc, mpf

#: tolerance for the trace test and for fixed points on the circle; ``a`` and
#: ``theta`` arrive as doubles, so finer distinctions are not meaningful
CLASSIFY_TOL = mpf("1e-12")


@dataclass(frozen=True)
class DiskAutomorphism:
    a: complex
    theta: float

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise ValueError(f"|a| must be < 1, got {abs(self.a)}")

    def matrix(self):
        """``[[e^{i theta}, -e^{i theta} a], [-conj(a), 1]]`` at the current precision."""
        u = mpmath.expj(mpf(self.theta))
        a = mpc(self.a.real, self.a.imag)
        return [[u, -u * a], [-mpmath.conj(a), mpc(1)]]

    def __call__(self, z):
        return _apply(self.matrix(), z)


def _apply(m, z):
    return (m[0][0] * z + m[0][1]) / (m[1][0] * z + m[1][1])


def _mul(m, n):
    return [
        [m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]],
        [m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]],
    ]


def _inv(m):
    return [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]


def _normalize(m):
    s = max(abs(x) for row in m for x in row)
    return [[x / s for x in row] for row in m]


def _power(m, k: int):
    """``m^k`` by repeated squaring; negative ``k`` uses the inverse."""
    if k < 0:
        m, k = _inv(m), -k
    result = [[mpc(1), mpc(0)], [mpc(0), mpc(1)]]
    while k:
        if k & 1:
            result = _normalize(_mul(m, result))
        k >>= 1
        if k:
            m = _normalize(_mul(m, m))
    return result


def _workdps(k: int) -> int:
    return 30 + abs(k)


@dataclass(frozen=True)
class Classification:
    kind: str  # elliptic, parabolic or hyperbolic
    trace_invariant: float  # tr^2 / det
    fixed_points: tuple
    interior_fixed_point: complex | None
    denjoy_wolff: complex | None  # attractor of f^k on the circle
    backward_denjoy_wolff: complex | None  # attractor of f^-k

    @property
    def transitive(self) -> bool:
        """Transitive (equivalently mixing) iff there is no fixed point in the disk."""
        return self.interior_fixed_point is None


def disk_classify(aut: DiskAutomorphism) -> Classification:
    with mp.workdps(40):
        m = aut.matrix()
        tr = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        tau = (tr * tr / det).real
        if abs(tau - 4) <= CLASSIFY_TOL:
            kind = "parabolic"
        elif tau < 4:
            kind = "elliptic"
        else:
            kind = "hyperbolic"
        # c z^2 + (d - a) z - b = 0 for the matrix [[a, b], [c, d]]
        A, B, C = m[1][0], m[1][1] - m[0][0], -m[0][1]
        if abs(A) <= CLASSIFY_TOL:
            roots = [] if abs(B) <= CLASSIFY_TOL else [-C / B]
        else:
            disc = mpmath.sqrt(B * B - 4 * A * C)
            roots = [(-B + disc) / (2 * A), (-B - disc) / (2 * A)]
            if kind == "parabolic":
                roots = [-B / (2 * A)]
        interior = next((z for z in roots if abs(z) < 1 - CLASSIFY_TOL), None)
        boundary = [z for z in roots if abs(abs(z) - 1) <= CLASSIFY_TOL]
        forward = backward = None
        if interior is None and boundary:
            if kind == "parabolic":
                forward = backward = boundary[0]
            else:
                derivs = [abs(det / (m[1][0] * z + m[1][1]) ** 2) for z in boundary]
                forward = boundary[0] if derivs[0] < derivs[1] else boundary[1]
                backward = boundary[1] if forward is boundary[0] else boundary[0]
        as_c = lambda z: None if z is None else complex(z)  # noqa: E731
        return Classification(
            kind,
            float(tau),
            tuple(complex(z) for z in roots),
            as_c(interior),
            as_c(forward),
            as_c(backward),
        )


Arc = tuple  # (start, length) in turns


def _angle(z) -> mpf:
    t = mpmath.arg(z) / (2 * mp.pi)
    return t + 1 if t < 0 else t


def _point(t) -> mpc:
    return mpmath.expj(2 * mp.pi * mpf(t))


def _ccw(t0, t1) -> mpf:
    d = t1 - t0
    d -= mpmath.floor(d)
    return d


def _map_arc(m, arc: Arc) -> Arc:
    start, length = mpf(arc[0]), mpf(arc[1])
    if length >= 1:
        return (mpf(0), mpf(1))
    z0, z1 = _point(start), _point(start + length)
    w0, w1 = _apply(m, z0), _apply(m, z1)
    t0 = _angle(w0)
    return (t0, _ccw(t0, _angle(w1)) if length > 0 else mpf(0))


def arc_images(aut: DiskAutomorphism, arcs: Sequence[Arc], k: int) -> list:
    """``f^k`` of a union of arcs; ``k < 0`` gives preimages."""
    with mp.workdps(_workdps(k)):
        m = _power(aut.matrix(), k)
        return [tuple(float(v) for v in _map_arc(m, arc)) for arc in arcs]


def disk_measure_pullback(aut: DiskAutomorphism, arcs: Sequence[Arc], k: int) -> float:
    """``lambda(f^{-k}(B))`` for a finite union ``B`` of disjoint arcs."""
    with mp.workdps(_workdps(k)):
        m = _power(aut.matrix(), -k)
        return float(mpmath.fsum(_map_arc(m, arc)[1] for arc in arcs))


def complement_of_arcs_at(points: Sequence[complex], width: float) -> list:
    """The circle minus arcs of length ``width`` centred at the given points."""
    centres = sorted(float(_angle(mpc(p.real, p.imag))) for p in points)
    arcs = []
    for i, c in enumerate(centres):
        nxt = centres[(i + 1) % len(centres)] + (1 if i + 1 == len(centres) else 0)
        start, end = c + width / 2, nxt - width / 2
        if end > start:
            arcs.append((start % 1.0, end - start))
    return arcs


def _phi(w):
    """Matrix of ``z -> (z - w) / (1 - conj(w) z)``, sending ``w`` to 0."""
    return [[mpc(1), -w], [-mpmath.conj(w), mpc(1)]]


def harmonic_measure(w, arc: Arc) -> mpf:
    """``m_w(arc)``: the length of the arc after moving ``w`` to the centre."""
    return _map_arc(_phi(w), arc)[1]


def poisson_check(aut: DiskAutomorphism, omega: complex, arc: Arc) -> tuple[float, float]:
    """``(m_omega(f^-1(arc)), m_{f(omega)}(arc))``, equal by conformal invariance."""
    with mp.workdps(40):
        w = mpc(omega.real, omega.imag)
        m = aut.matrix()
        pre = _map_arc(_inv(m), arc)
        lhs = harmonic_measure(w, pre)
        rhs = harmonic_measure(_apply(m, w), arc)
        return float(lhs), float(rhs)


def parse_disk(text: str) -> DiskAutomorphism:
    """``"a,theta"``; ``a`` may be complex, e.g. ``0.5`` or ``0.3+0.2j``."""
    try:
        a_text, theta_text = text.split(",")
        return DiskAutomorphism(complex(a_text.strip()), float(theta_text))
    except ValueError as exc:
        raise ValueError(f"expected 'a,theta' with |a| < 1, got {text!r}: {exc}") from None


def disk_report(aut: DiskAutomorphism, epsilon: float = 0.1, k_max: int = 64) -> dict:
    """Classification plus ``lambda(f^{-k}(B))`` and ``lambda(f^k(B))`` along k,
    for ``B`` the circle minus ``epsilon/2``-arcs at the Denjoy-Wolff points
    (at the interior fixed point's direction for elliptic maps, ``B`` is the
    circle minus one arc at 1)."""
    cls = disk_classify(aut)
    if cls.denjoy_wolff is not None:
        centres = {cls.denjoy_wolff, cls.backward_denjoy_wolff}
    else:
        centres = {complex(1, 0)}
    B = complement_of_arcs_at(sorted(centres, key=lambda z: cmath.phase(z)), epsilon / 2)
    backward = [disk_measure_pullback(aut, B, k) for k in range(1, k_max + 1)]
    forward = [disk_measure_pullback(aut, B, -k) for k in range(1, k_max + 1)]
    k0 = None
    for k in range(k_max, 0, -1):
        if backward[k - 1] <= epsilon and forward[k - 1] <= epsilon:
            k0 = k
        else:
            break
    return {
        "classification": cls,
        "B": B,
        "lambda_B": sum(length for _, length in B),
        "pullback_mass": backward,
        "push_mass": forward,
        "k0": k0,
    }
