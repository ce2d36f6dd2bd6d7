"""Real roots of the variational cubic, branch tracking over ``beta`` and
bracketed minimization of each branch ``E_i(beta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cubic import CubicCoefficients, Variant, assemble

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MIN_TOL = 1e-10
PROBE_H = 1e-6
CROSSING_GAP = 1e-6
DEFAULT_GRID = (1e-4, 1.2, 2000)
DEFAULT_BRACKETS = {1: (1e-4, 0.1), 2: (0.3, 1.1)}


class BranchCrossingError(RuntimeError):
    def __init__(self, lo, hi, reason):
        super().__init__(f"branch identity ambiguous on beta in [{lo!r}, {hi!r}]: {reason}")
        self.interval = (lo, hi)


class NoInteriorMinimumError(RuntimeError):
    def __init__(self, branch_index, beta, E, bracket):
        super().__init__(
            f"branch {branch_index} has no interior minimum on {bracket}; "
            f"smallest value at boundary beta={beta!r} (E={E!r})"
        )
        self.branch_index = branch_index
        self.beta = beta
        self.E = E
        self.bracket = bracket


@dataclass(frozen=True)
class BranchPoint:
    beta: float
    roots: tuple
    real_count: int


def _polish(coeffs: CubicCoefficients, r: float) -> float:
    d = coeffs.derivative(r)
    if d == 0.0:
        return r
    r2 = r - coeffs(r) / d
    return r2 if abs(coeffs(r2)) <= abs(coeffs(r)) else r


def _quadratic_roots(b: float, c: float) -> list:
    """Real roots of ``x^2 + b x + c`` without cancellation."""
    disc = b * b - 4.0 * c
    if disc < 0.0:
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return [0.0, 0.0]
    return [q, c / q]


def cubic_real_roots(coeffs: CubicCoefficients) -> BranchPoint:
    """Real roots of a monic cubic, sorted descending.

    Trigonometric form when three roots are real, Cardano otherwise, followed
    by one Newton step per root.
    """
    if coeffs.c3 != 1.0:
        raise ValueError("cubic must be monic")
    a, b, c = coeffs.c2, coeffs.c1, coeffs.c0
    if c == 0.0:
        raw = [0.0] + _quadratic_roots(a, b)
    else:
        shift = a / 3.0
        p = b - a * a / 3.0
        q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
        disc = q * q / 4.0 + p**3 / 27.0
        m = 2.0 * math.sqrt(-p / 3.0) if p < 0.0 else 0.0
        if disc <= 0.0 and p * m != 0.0:
            arg = 3.0 * q / (p * m)
            theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
            raw = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
        else:
            sq = math.sqrt(max(disc, 0.0))
            u = np.cbrt(-q / 2.0 + sq)
            v = np.cbrt(-q / 2.0 - sq)
            raw = [float(u + v) - shift]
    roots = sorted((_polish(coeffs, r) + 0.0 for r in raw), reverse=True)
    return BranchPoint(coeffs.beta, tuple(roots), len(roots))


def bisection_roots(coeffs: CubicCoefficients, lo: float = -10.0, hi: float = 10.0, samples: int = 4001) -> list:
    """Oracle: bracket sign changes on a uniform grid, then bisect to machine precision."""
    xs = np.linspace(lo, hi, samples)
    vals = [coeffs(x) for x in xs]
    out = []
    for x0, x1, f0, f1 in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if f0 == 0.0:
            out.append(float(x0))
            continue
        # compare signs, not the product: subnormal values underflow to 0
        if (f0 < 0.0) == (f1 < 0.0) or f1 == 0.0:
            continue
        a, b, fa = float(x0), float(x1), f0
        while True:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            fm = coeffs(mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0.0) == (fa < 0.0):
                a, fa = mid, fm
            else:
                b = mid
        out.append(0.5 * (a + b))
    if vals[-1] == 0.0:
        out.append(float(xs[-1]))
    return sorted(out, reverse=True)


# --------------------------------------------------------------------------
# branch scan


@dataclass(frozen=True)
class BranchTable:
    alpha: float
    variant: Variant
    points: list = field(default_factory=list)

    @property
    def betas(self):
        return np.array([p.beta for p in self.points])

    def branch(self, index: int) -> np.ndarray:
        """Values of ``E_index`` along the grid (NaN where the root is absent)."""
        return np.array(
            [p.roots[index - 1] if len(p.roots) >= index else np.nan for p in self.points]
        )


def default_grid(lo=DEFAULT_GRID[0], hi=DEFAULT_GRID[1], steps=DEFAULT_GRID[2]) -> np.ndarray:
    return np.geomspace(lo, hi, steps)


def branch_scan(alpha: float, variant, beta_grid, check_crossing: bool = True) -> BranchTable:
    grid = np.asarray(beta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("beta grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("beta grid must be strictly ascending")
    if np.any(grid[1:] <= 0.0) or grid[0] < 0.0:
        raise ValueError("beta grid must be positive (a leading 0 is allowed)")
    variant = Variant(variant)
    points = [cubic_real_roots(assemble(alpha, float(b), variant)) for b in grid]
    if check_crossing:
        for i, pt in enumerate(points):
            lo = float(grid[max(i - 1, 0)])
            hi = float(grid[min(i + 1, len(grid) - 1)])
            if i and pt.real_count != points[i - 1].real_count:
                raise BranchCrossingError(float(grid[i - 1]), float(grid[i]), "real root count changes")
            if pt.real_count == 3:
                gap = min(pt.roots[0] - pt.roots[1], pt.roots[1] - pt.roots[2])
                if gap <= CROSSING_GAP:
                    raise BranchCrossingError(lo, hi, f"roots within {gap:.3g}")
    return BranchTable(alpha, variant, points)


# --------------------------------------------------------------------------
# minimization


@dataclass(frozen=True)
class BranchMinimum:
    branch_index: int
    beta_star: float
    E_star: float
    bracket: tuple
    converged: bool
    variant: Variant = Variant.DERIVED
    alpha: float = 1.0 / 137.0
    evaluations: int = 0

    def to_dict(self) -> dict:
        return {
            "branch_index": self.branch_index,
            "beta_star": self.beta_star,
            "E_star": self.E_star,
            "bracket": list(self.bracket),
            "converged": self.converged,
            "variant": self.variant.value,
            "alpha": self.alpha,
            "evaluations": self.evaluations,
        }


def branch_value(alpha: float, variant, branch_index: int, beta: float) -> float:
    pt = cubic_real_roots(assemble(alpha, beta, variant))
    if pt.real_count < branch_index:
        raise BranchCrossingError(beta, beta, f"branch {branch_index} absent (one real root)")
    return pt.roots[branch_index - 1]


def _coefficient_slopes(alpha, beta, variant):
    """d/dbeta of (c2, c1, c0)."""
    k = 5.0 if Variant(variant) is Variant.DERIVED else 4.0
    b, b2 = beta, beta * beta
    d = 1.0 + b2
    dd = d * d
    dc2 = 4.0 * alpha * (1.0 - b2) / dd
    num1 = 1.0 + 2.0 * b2 + k * b2 * b2
    dc1 = -4.0 * ((4.0 * b + 4.0 * k * b * b2) * d - num1 * 2.0 * b) / dd
    dc0 = -8.0 * alpha * ((1.0 + 9.0 * b2) * d - (b + 3.0 * b * b2) * 2.0 * b) / dd
    return dc2, dc1, dc0


def branch_slope(alpha: float, variant, branch_index: int, beta: float) -> float:
    """``dE_i/dbeta`` by implicit differentiation of the cubic."""
    E = branch_value(alpha, variant, branch_index, beta)
    coeffs = assemble(alpha, beta, variant)
    dc2, dc1, dc0 = _coefficient_slopes(alpha, beta, variant)
    return -((dc2 * E + dc1) * E + dc0) / coeffs.derivative(E)


def _golden(fn, lo, hi, tol):
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    n = 2
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = fn(x2)
        n += 1
    return (x1, f1, a, b, n) if f1 <= f2 else (x2, f2, a, b, n)


def minimize_branch(alpha: float, variant, branch_index: int, bracket=None, tol: float = MIN_TOL) -> BranchMinimum:
    """Minimize ``E_i(beta)`` on a bracket.

    Golden-section search down to width ``tol``, then parabolic refinement:
    the parabola matching the analytic slope at ``beta* +- h`` has its vertex
    at the secant root of ``dE/dbeta``. Values alone cannot locate a flat
    minimum better than ``sqrt(machine eps)``; the slope can.

    Raises
    ------
    NoInteriorMinimumError
        If the smallest value on the bracket sits at one of its ends.
    """
    variant = Variant(variant)
    if branch_index not in (1, 2, 3):
        raise ValueError(f"branch_index must be 1, 2 or 3, got {branch_index!r}")
    if bracket is None:
        bracket = DEFAULT_BRACKETS.get(branch_index)
        if bracket is None:
            raise ValueError(f"no default bracket for branch {branch_index}")
    lo, hi = map(float, bracket)
    if not 0.0 < lo < hi:
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")

    def fn(b):
        return branch_value(alpha, variant, branch_index, b)

    x, fx, a, b, evals = _golden(fn, lo, hi, tol)
    edge = 4.0 * tol
    if x - lo <= edge or hi - x <= edge:
        bx = lo if x - lo <= edge else hi
        raise NoInteriorMinimumError(branch_index, bx, fn(bx), (lo, hi))

    # parabolic refinement on the slope; round-off lets golden section land
    # up to ~sqrt(eps) away from a flat minimum, so allow that much travel
    reach = max(1e-6 * x, 1e4 * tol)
    window = (max(lo, x - reach), min(hi, x + reach))
    for _ in range(4):
        h = max(1e-7 * x, 1e-12)
        sp, sm = branch_slope(alpha, variant, branch_index, x + h), branch_slope(alpha, variant, branch_index, x - h)
        curv = (sp - sm) / (2.0 * h)
        evals += 4
        if not curv > 0.0:
            break
        x_new = x - branch_slope(alpha, variant, branch_index, x) / curv
        if not window[0] <= x_new <= window[1]:
            break
        done = abs(x_new - x) <= 1e-15 * x
        x = x_new
        if done:
            break
    fx = fn(x)

    converged = fn(x + PROBE_H) >= fx and fn(x - PROBE_H) >= fx
    return BranchMinimum(branch_index, x, fx, (lo, hi), converged, variant, alpha, evals + 3)
