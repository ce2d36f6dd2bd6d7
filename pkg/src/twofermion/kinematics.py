"""Single-particle energies, the free two-fermion equal-time propagator and the
relative-momentum constraint of a moving bound pair.

Momenta are 3-vectors in units of ``m c``. The propagator is

    L2(p, q; E) = m1 m2 / (eps1 eps2) * sum over signs 1 / (E -+ eps1 -+ eps2)

with four simple poles at ``+-eps1 +- eps2``, all carrying the same positive
amplitude ``m1 m2 / (eps1 eps2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

POLE_GUARD = 1e-9
RESIDUE_OFFSETS = (1e-4, 5e-5, 2.5e-5)
SOLVE_TOL = 1e-12
MAX_ITER = 200
FIXED_POINT_DAMPING = 0.5
# Fixed-point sweeps before switching to Newton.
FIXED_POINT_BUDGET = 100


class PoleProximityError(ValueError):
    def __init__(self, E, pole, distance):
        super().__init__(
            f"E={E!r} lies within {POLE_GUARD:g} of the propagator pole {pole!r} "
            f"(distance {distance:.3g})"
        )
        self.E = E
        self.pole = pole
        self.distance = distance


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3g})")
        self.residual = residual


class Momentum3(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def of(cls, p) -> "Momentum3":
        arr = np.asarray(p, dtype=float).reshape(3)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"momentum components must be finite, got {p!r}")
        return cls(*(float(c) for c in arr))


def _vec(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"momentum components must be finite, got {p!r}")
    return arr


def eps(p, mass: float = 1.0) -> float:
    """Relativistic energy ``sqrt(mass^2 + |p|^2)``."""
    if not mass > 0.0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    p = _vec(p)
    return float(np.sqrt(mass * mass + p @ p))


# --------------------------------------------------------------------------
# propagator


@dataclass(frozen=True)
class PropagatorValue:
    value: float
    pole_distance: float


def l2_poles(p, q, m1: float = 1.0, m2: float = 1.0) -> tuple:
    """The four poles ``(e1+e2, e1-e2, -e1+e2, -e1-e2)``."""
    e1, e2 = eps(p, m1), eps(q, m2)
    return (e1 + e2, e1 - e2, -e1 + e2, -e1 - e2)


def l2_rational(E, e1, e2, m1=1.0, m2=1.0):
    """Closed rational form of L2 in terms of the single-particle energies."""
    num = 4.0 * E * (E * E - e1 * e1 - e2 * e2)
    den = E**4 - 2.0 * E * E * (e1 * e1 + e2 * e2) + (e1 * e1 - e2 * e2) ** 2
    return m1 * m2 / (e1 * e2) * num / den


def l2_pole_sum(E, e1, e2, m1=1.0, m2=1.0):
    """Four-pole partial-fraction form of L2."""
    amp = m1 * m2 / (e1 * e2)
    return amp * (
        1.0 / (E - e1 - e2) + 1.0 / (E - e1 + e2) + 1.0 / (E + e1 - e2) + 1.0 / (E + e1 + e2)
    )


def l2(p, q, E: float, m1: float = 1.0, m2: float = 1.0) -> PropagatorValue:
    """Evaluate the equal-time propagator ``L2(p, q; E)``.

    Raises
    ------
    PoleProximityError
        If ``E`` is within ``POLE_GUARD`` of any of the poles ``+-eps1 +- eps2``.
    """
    e1, e2 = eps(p, m1), eps(q, m2)
    poles = (e1 + e2, e1 - e2, -e1 + e2, -e1 - e2)
    dists = [abs(E - pole) for pole in poles]
    k = int(np.argmin(dists))
    if dists[k] <= POLE_GUARD:
        raise PoleProximityError(E, poles[k], dists[k])
    return PropagatorValue(float(l2_rational(E, e1, e2, m1, m2)), float(dists[k]))


@dataclass(frozen=True)
class L2Residues:
    poles: tuple
    residues: tuple
    numeric_residues: tuple
    degenerate: bool

    def pairs(self):
        return list(zip(self.poles, self.residues))


def _richardson_residue(E0, e1, e2, m1, m2, offsets, multiplicity=1):
    # (E - E0) L2(E) = r + a h + b h^2 + ...; offsets halve successively
    h = np.asarray(offsets, dtype=float)
    r = np.array([hi * l2_pole_sum(E0 + hi, e1, e2, m1, m2) for hi in h]) / multiplicity
    r1 = 2.0 * r[1:] - r[:-1]
    return float((4.0 * r1[1] - r1[0]) / 3.0)


def l2_residues(p, q, m1: float = 1.0, m2: float = 1.0, offsets=RESIDUE_OFFSETS) -> L2Residues:
    """Poles and residues of L2 as a function of E.

    The analytic residue is ``m1 m2 / (eps1 eps2)`` at every pole; a numerical
    estimate ``lim (E - E0) L2(E)`` via Richardson extrapolation is returned
    alongside. When ``eps1 == eps2`` the two middle poles coincide at ``E = 0``
    and ``degenerate`` is set (each coincident pole keeps its own amplitude).
    """
    e1, e2 = eps(p, m1), eps(q, m2)
    poles = (e1 + e2, e1 - e2, -e1 + e2, -e1 - e2)
    amp = m1 * m2 / (e1 * e2)
    degenerate = e1 == e2
    # keep extrapolation offsets well inside the gap to the neighbouring pole
    gap = min(abs(a - b) for i, a in enumerate(poles) for b in poles[i + 1:] if a != b)
    scale = min(1.0, 1e-2 * gap / offsets[0])
    offs = tuple(o * scale for o in offsets)
    numeric = []
    for pole in poles:
        mult = sum(1 for other in poles if other == pole)
        numeric.append(_richardson_residue(pole, e1, e2, m1, m2, offs, mult))
    return L2Residues(poles, (amp,) * 4, tuple(numeric), degenerate)


# --------------------------------------------------------------------------
# relative momentum of a moving pair


def _constraint(f, s, g, m1, m2):
    e2 = np.sqrt(m2 * m2 + f @ f)
    fg = f + g
    e1 = np.sqrt(m1 * m1 + fg @ fg)
    return f + g * (e2 / (e2 + e1)) - s, e1, e2


def _jacobian(f, g, e1, e2):
    grad_e2 = f / e2
    grad_e1 = (f + g) / e1
    denom = (e1 + e2) ** 2
    grad_w = (grad_e2 * e1 - e2 * grad_e1) / denom
    return np.eye(3) + np.outer(g, grad_w)


@dataclass(frozen=True)
class KinematicsSample:
    s: Momentum3
    g: Momentum3
    f: Momentum3
    residual: float
    identity_residuals: Optional[tuple]
    m1: float = 1.0
    m2: float = 1.0
    iterations: int = 0
    method: str = "fixed_point"

    def to_dict(self) -> dict:
        return {
            "s": list(self.s),
            "g": list(self.g),
            "f": list(self.f),
            "residual": self.residual,
            "identity_residuals": None if self.identity_residuals is None
            else list(self.identity_residuals),
            "m1": self.m1,
            "m2": self.m2,
            "iterations": self.iterations,
            "method": self.method,
        }


def solve_f(s, g, m1: float = 1.0, m2: float = 1.0, f0=None, tol: float = SOLVE_TOL) -> KinematicsSample:
    """Solve ``s = f + g eps2(f) / (eps2(f) + eps1(f + g))`` for ``f``.

    Damped fixed-point iteration, falling back to Newton's method on the
    3-vector residual if the contraction is too slow.
    """
    s, g = _vec(s), _vec(g)
    if not (m1 > 0.0 and m2 > 0.0):
        raise ValueError("masses must be positive")
    f = s - 0.5 * g if f0 is None else _vec(f0).copy()
    if not np.any(g):
        f = s.copy()
    F, e1, e2 = _constraint(f, s, g, m1, m2)
    res = float(np.max(np.abs(F)))
    it, method = 0, "fixed_point"
    while res > tol and it < FIXED_POINT_BUDGET:
        f = (1.0 - FIXED_POINT_DAMPING) * f + FIXED_POINT_DAMPING * (f - F)
        F, e1, e2 = _constraint(f, s, g, m1, m2)
        res = float(np.max(np.abs(F)))
        it += 1
    if res > tol:
        method = "newton"
    while res > tol and it < MAX_ITER:
        step = np.linalg.solve(_jacobian(f, g, e1, e2), F)
        f = f - step
        F, e1, e2 = _constraint(f, s, g, m1, m2)
        res = float(np.max(np.abs(F)))
        it += 1
    if not res <= tol:
        raise ConvergenceError(f"relative-momentum solve did not converge in {it} iterations", res)
    idents = _identity_residuals(s, g, f, m1) if m1 == m2 else None
    return KinematicsSample(
        Momentum3.of(s), Momentum3.of(g), Momentum3.of(f), res, idents, m1, m2, it, method
    )


def expansion_f(s, g, mass: float = 1.0, reading: str = "eps_squared") -> np.ndarray:
    """Small-``g`` approximation ``f = s - g/2 + g (s.g) / (4 D)`` for equal masses.

    ``reading="eps_squared"`` uses ``D = eps(s)^2``; ``"eps_times_s_squared"``
    is the alternative parse ``D = eps(s) |s|^2`` kept for comparison.
    """
    s, g = _vec(s), _vec(g)
    es = eps(s, mass)
    if reading == "eps_squared":
        d = es * es
    elif reading == "eps_times_s_squared":
        d = es * (s @ s)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    return s - 0.5 * g + g * (s @ g) / (4.0 * d)


def _identity_residuals(s, g, f, mass):
    es2 = mass * mass + s @ s
    ef = np.sqrt(mass * mass + f @ f)
    efg = np.sqrt(mass * mass + (f + g) @ (f + g))
    g2, sg = g @ g, s @ g
    r1 = abs(efg * ef - (es2 + 0.25 * g2))
    r2 = abs(efg**2 + ef**2 - (2.0 * es2 + 0.5 * g2 + sg * sg / es2))
    r3 = abs(efg**2 - ef**2 - 2.0 * sg)
    return (float(r1), float(r2), float(r3))


def expansion_identities(sample: KinematicsSample) -> tuple:
    """Residuals of the three small-``g`` energy identities at a solved sample:

    * ``eps(f+g) eps(f) = eps(s)^2 + g^2/4``
    * ``eps(f+g)^2 + eps(f)^2 = 2 eps(s)^2 + g^2/2 + (s.g)^2 / eps(s)^2``
    * ``eps(f+g)^2 - eps(f)^2 = 2 s.g``

    Each residual is ``O(g^3)`` or smaller.
    """
    if sample.m1 != sample.m2:
        raise ValueError("expansion identities hold for equal masses only")
    if not sample.residual <= SOLVE_TOL:
        raise ValueError("sample is not converged")
    return _identity_residuals(
        np.array(sample.s), np.array(sample.g), np.array(sample.f), sample.m1
    )


def loglog_slope(gs, values) -> float:
    """Least-squares slope of ``log(values)`` against ``log(gs)``."""
    x = np.log(np.asarray(gs, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
