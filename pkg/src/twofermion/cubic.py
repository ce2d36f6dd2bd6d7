"""The dimensionless centre-of-mass equation for the electron-positron pair,

    E (1 - Lap)(E^2 - 4 + 4 Lap) xi = -4 alpha (E^2 - 2 + 2 Lap) (1/x) xi,

reduced with the ansatz ``xi = exp(-beta x)``.

Acting with the operators pointwise gives

    E(1-b^2)[E^2 - 4(1-b^2)] xi - 32 pi (alpha + b E) delta(x)
        + (2 b E [E^2 - 8(1-b^2)] + 4 alpha [E^2 - 2(1-b^2)]) xi / x = 0.

Dropping the contact term leaves two algebraic conditions with closed-form
solutions; projecting onto ``xi`` instead yields a monic cubic in ``E``.
Two versions of that cubic are kept: ``printed`` carries ``4 b^4`` in the
linear coefficient, ``derived`` carries the ``5 b^4`` that term-by-term
integration produces.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .matrix_elements import MatrixElements, closed_forms


class Variant(str, enum.Enum):
    PRINTED = "printed"
    DERIVED = "derived"


VARIANTS = (Variant.PRINTED, Variant.DERIVED)
_QUARTIC = {Variant.PRINTED: 4.0, Variant.DERIVED: 5.0}


def _check(alpha, beta, allow_zero_beta=True):
    if not (math.isfinite(alpha) and 0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    ok = beta >= 0.0 if allow_zero_beta else beta > 0.0
    if not (math.isfinite(beta) and ok):
        raise ValueError(f"beta must be positive, got {beta!r}")


@dataclass(frozen=True)
class CubicCoefficients:
    """Monic cubic ``E^3 + c2 E^2 + c1 E + c0``."""

    c2: float
    c1: float
    c0: float
    beta: float
    alpha: float
    variant: Variant
    c3: float = 1.0

    def __call__(self, E):
        return ((E + self.c2) * E + self.c1) * E + self.c0

    def derivative(self, E):
        return (3.0 * E + 2.0 * self.c2) * E + self.c1

    def as_tuple(self):
        return (self.c3, self.c2, self.c1, self.c0)


def assemble(alpha: float, beta: float, variant="derived") -> CubicCoefficients:
    """Coefficients of the variational cubic at trial exponent ``beta``.

    ``beta = 0`` is accepted as the free limit ``E^3 - 4E``.
    """
    variant = Variant(variant)
    _check(alpha, beta)
    b2 = beta * beta
    d = 1.0 + b2
    k = _QUARTIC[variant]
    return CubicCoefficients(
        c2=4.0 * alpha * beta / d,
        c1=-4.0 * (1.0 + 2.0 * b2 + k * b2 * b2) / d,
        c0=-8.0 * alpha * beta * (1.0 + 3.0 * b2) / d,
        beta=beta,
        alpha=alpha,
        variant=variant,
    )


def _normalize(p3, p2, p1, p0, alpha, beta):
    return CubicCoefficients(p2 / p3, p1 / p3, p0 / p3, beta, alpha, Variant.DERIVED)


def assemble_from_pointwise(alpha: float, beta: float, me: MatrixElements | None = None) -> CubicCoefficients:
    """Derived cubic from the pointwise reduced equation projected onto ``xi``.

    Each polynomial-in-``E`` coefficient collects the ``xi``, ``delta`` and
    ``xi/x`` terms weighted by ``<xi|xi>``, ``xi(0)^2`` and ``<xi|1/x|xi>``.
    """
    _check(alpha, beta, allow_zero_beta=False)
    me = me or closed_forms(beta)
    n, i, z = me.norm, me.inv_x, me.at_origin
    a, b, b2 = alpha, beta, beta * beta
    u = 1.0 - b2
    # xi term: E u (E^2 - 4u) = u E^3 - 4u^2 E
    # delta term: -32 pi (a + b E) xi(0)^2
    # xi/x term: 2b E^3 - 16 b u E + 4a E^2 - 8 a u
    p3 = u * n + 2.0 * b * i
    p2 = 4.0 * a * i
    p1 = -4.0 * u * u * n - 32.0 * math.pi * b * z - 16.0 * b * u * i
    p0 = -32.0 * math.pi * a * z - 8.0 * a * u * i
    return _normalize(p3, p2, p1, p0, alpha, beta)


def assemble_from_operators(alpha: float, beta: float, me: MatrixElements | None = None) -> CubicCoefficients:
    """Derived cubic from operator matrix elements, with no explicit contact term.

    Expands ``E[(E^2-4) + (8-E^2) Lap - 4 Lap^2]`` on the left and
    ``-4 alpha [(E^2-2)/x + 2 Lap(1/x)]`` on the right; the contact pieces are
    carried by ``<Lap^2> = 5 pi b`` and ``<Lap xi|xi/x> = -3 pi``.
    """
    _check(alpha, beta, allow_zero_beta=False)
    me = me or closed_forms(beta)
    n, i, lap, lap2, lx = me.norm, me.inv_x, me.lap, me.lap2, me.lap_inv_x
    a = alpha
    p3 = n - lap
    p2 = 4.0 * a * i
    p1 = -4.0 * n + 8.0 * lap - 4.0 * lap2
    p0 = -8.0 * a * i + 8.0 * a * lx
    return _normalize(p3, p2, p1, p0, alpha, beta)


# --------------------------------------------------------------------------
# solutions without the contact term


@dataclass(frozen=True)
class ClosedFormState:
    E: float
    beta: float
    state_class: str  # "positronium_1s" | "deep"


def amplitude_residual(E: float, beta: float) -> float:
    """Coefficient of ``xi``: ``E (1 - b^2)(E^2 - 4(1 - b^2))``."""
    u = 1.0 - beta * beta
    return E * u * (E * E - 4.0 * u)


def coulomb_residual(E: float, beta: float, alpha: float) -> float:
    """Coefficient of ``xi/x``: ``2 b E (E^2 - 8(1-b^2)) + 4 alpha (E^2 - 2(1-b^2))``."""
    u = 1.0 - beta * beta
    return 2.0 * beta * E * (E * E - 8.0 * u) + 4.0 * alpha * (E * E - 2.0 * u)


def closed_form_states(alpha: float) -> tuple[ClosedFormState, ClosedFormState]:
    """The positronium 1s state and the deep state of the contact-free equations."""
    _check(alpha, 1.0)
    root = math.sqrt(1.0 - alpha * alpha)
    # 1 - sqrt(1 - a^2) written without cancellation
    small = alpha * alpha / (1.0 + root)
    e1 = math.sqrt(2.0 * (1.0 + root))
    b1 = math.sqrt(small / 2.0)
    return (
        ClosedFormState(e1, b1, "positronium_1s"),
        ClosedFormState(-2.0 * alpha, 1.0, "deep"),
    )
