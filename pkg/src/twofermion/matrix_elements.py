"""Radial matrix elements of the s-wave trial function ``xi(x) = exp(-beta x)``.

Closed forms (``d^3x`` integrals, unnormalized ``xi``)::

    <xi|xi>      = pi / beta^3
    <xi|1/x|xi>  = pi / beta^2
    <xi|Lap|xi>  = -pi / beta
    <xi|Lap^2|xi> = 5 pi beta

``Lap^2 exp(-beta x)`` carries a contact term ``8 pi beta delta(x)`` coming from
``Lap(1/x) = -4 pi delta``. The value ``5 pi beta`` is the momentum-space one
and includes it; the pointwise real-space integrand gives ``-3 pi beta``.

The quadrature oracles below never use the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

QUAD_EPSABS = 1e-12
QUAD_CUTOFF = 60.0  # in units of 1/beta; tail ~ exp(-120)
INTEGRANDS = ("norm", "inv_x", "lap", "lap2_realspace", "lap_sq")


class AccuracyError(RuntimeError):
    def __init__(self, message, estimate):
        super().__init__(f"{message} (error estimate {estimate:.3g})")
        self.estimate = estimate


def _check_beta(beta):
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta!r}")


@dataclass(frozen=True)
class MatrixElements:
    beta: float
    norm: float
    inv_x: float
    lap: float
    lap2: float
    at_origin: float = 1.0
    # <Lap xi | xi/x>, the symmetric form of <xi|Lap(xi/x)>
    lap_inv_x: float = -3.0 * math.pi

    def ratios(self) -> dict:
        """Elements divided by ``<xi|xi>``: ``inv_x -> beta``, ``lap -> -beta^2``, ``lap2 -> 5 beta^4``."""
        return {
            "inv_x": self.inv_x / self.norm,
            "lap": self.lap / self.norm,
            "lap2": self.lap2 / self.norm,
        }


def closed_forms(beta: float) -> MatrixElements:
    _check_beta(beta)
    return MatrixElements(
        beta=beta,
        norm=math.pi / beta**3,
        inv_x=math.pi / beta**2,
        lap=-math.pi / beta,
        lap2=5.0 * math.pi * beta,
    )


def contact_lap2(beta: float) -> float:
    """Contact contribution ``8 pi beta xi(0)^2`` missing from the pointwise ``<xi|Lap^2|xi>``."""
    _check_beta(beta)
    return 8.0 * math.pi * beta


# Integrands in the scaled variable t = beta x, with the 1/x, Lap factors
# written out explicitly (Lap xi = (beta^2 - 2 beta / x) xi for x > 0).
def _scaled_integrand(name):
    if name == "norm":
        return lambda t: t * t * math.exp(-2.0 * t), -3
    if name == "inv_x":
        return lambda t: t * math.exp(-2.0 * t), -2
    if name == "lap":
        return lambda t: (t * t - 2.0 * t) * math.exp(-2.0 * t), -1
    if name == "lap2_realspace":
        # xi * Lap^2 xi = beta^3 (beta x - 4) / x * exp(-2 beta x), pointwise
        return lambda t: (t - 4.0) * t * math.exp(-2.0 * t), 1
    if name == "lap_sq":
        # |Lap xi|^2 = (beta^2 - 2 beta/x)^2 exp(-2 beta x)
        return lambda t: (t - 2.0) ** 2 * math.exp(-2.0 * t), 1
    raise ValueError(f"unknown integrand {name!r}; expected one of {INTEGRANDS}")


def quadrature_oracle(beta: float, integrand_id: str, epsabs: float = QUAD_EPSABS) -> float:
    """Adaptive Gauss-Kronrod evaluation of ``4 pi int_0^inf w(x) x^2 dx``.

    The integral is taken over ``[0, 60/beta]`` after the substitution
    ``t = beta x``; ``epsabs`` applies to the dimensionless integral in ``t``,
    so the absolute tolerance on the result scales as ``beta^k`` with the
    element's degree.
    """
    _check_beta(beta)
    fn, power = _scaled_integrand(integrand_id)
    val, err = integrate.quad(fn, 0.0, QUAD_CUTOFF, epsabs=epsabs, epsrel=0.0, limit=200)
    if err > epsabs:
        raise AccuracyError(f"quadrature of {integrand_id} missed tolerance {epsabs:g}", err)
    return 4.0 * math.pi * val * beta**power


def fourier_lap2(beta: float, epsabs: float = QUAD_EPSABS) -> float:
    """``<xi|Lap^2|xi>`` evaluated in momentum space.

    ``int s^4 |xi~(s)|^2 d^3s / (2 pi)^3`` with ``xi~(s) = 8 pi beta / (beta^2 + s^2)^2``.
    Substituting ``s = beta u`` leaves ``32 beta int_0^inf u^6 / (1 + u^2)^4 du``.
    """
    _check_beta(beta)
    val, err = integrate.quad(
        lambda u: u**6 / (1.0 + u * u) ** 4, 0.0, np.inf, epsabs=epsabs, epsrel=1e-13, limit=200
    )
    if err > max(epsabs, 1e-13 * abs(val)):
        raise AccuracyError("momentum-space quadrature missed tolerance", err)
    # radial measure 4 pi s^2 ds / (2 pi)^3 = s^2 ds / (2 pi^2)
    return (8.0 * math.pi) ** 2 / (2.0 * math.pi**2) * beta * val
