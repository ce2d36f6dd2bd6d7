import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from twofermion.matrix_elements import (
    closed_forms,
    contact_lap2,
    fourier_lap2,
    quadrature_oracle,
)

PI = math.pi
betas = st.floats(1e-3, 2.0)


def test_closed_forms_beta_one():
    me = closed_forms(1.0)
    assert (me.norm, me.inv_x, me.lap, me.lap2, me.at_origin) == pytest.approx(
        (PI, PI, -PI, 5 * PI, 1.0), rel=1e-15)


def test_closed_form_signs():
    me = closed_forms(0.37)
    assert me.norm > 0 and me.inv_x > 0 and me.lap < 0 and me.lap2 > 0


def test_domain():
    with pytest.raises(ValueError):
        closed_forms(0.0)
    with pytest.raises(ValueError):
        quadrature_oracle(-1.0, "norm")
    with pytest.raises(ValueError):
        quadrature_oracle(1.0, "bogus")


@pytest.mark.parametrize("beta, name, expected", [
    (1.0, "norm", PI),
    (0.5, "norm", 8 * PI),
    (2.0, "inv_x", PI / 4),
    (1.0, "lap", -PI),
])
def test_quadrature_examples(beta, name, expected):
    assert quadrature_oracle(beta, name) == pytest.approx(expected, abs=1e-10 * max(1, expected))


@pytest.mark.parametrize("beta", np.geomspace(1e-3, 2.0, 20))
def test_closed_forms_vs_quadrature(beta):
    me = closed_forms(beta)
    for name in ("norm", "inv_x", "lap"):
        assert quadrature_oracle(beta, name) == pytest.approx(getattr(me, name), rel=1e-8)


@given(betas)
def test_norm_over_inv_x(beta):
    me = closed_forms(beta)
    assert me.norm / me.inv_x == pytest.approx(1 / beta, rel=1e-14)


@given(st.floats(1e-3, 1.0))
def test_scaling_law(beta):
    a, b = closed_forms(beta), closed_forms(2 * beta)
    assert b.norm / a.norm == pytest.approx(2.0**-3, rel=1e-14)
    assert b.inv_x / a.inv_x == pytest.approx(2.0**-2, rel=1e-14)
    assert b.lap / a.lap == pytest.approx(2.0**-1, rel=1e-14)
    assert b.lap2 / a.lap2 == pytest.approx(2.0, rel=1e-14)


def test_fourier_radial_integral():
    # independent evaluation of int_0^inf u^6 / (1 + u^2)^4 du
    val = mpmath.quad(lambda u: u**6 / (1 + u**2) ** 4, [0, 1, mpmath.inf])
    assert float(val) == pytest.approx(5 * PI / 32, rel=1e-14)
    assert fourier_lap2(1.0) == pytest.approx(32 * float(val), rel=1e-12)


@pytest.mark.parametrize("beta, expected", [(1.0, 5 * PI), (0.5, 2.5 * PI)])
def test_fourier_lap2_examples(beta, expected):
    assert fourier_lap2(beta) == pytest.approx(expected, rel=1e-8)


@given(betas)
def test_fourier_lap2_linear_and_closed_form(beta):
    assert fourier_lap2(beta) / beta == pytest.approx(fourier_lap2(1.0), rel=1e-12)
    assert fourier_lap2(beta) == pytest.approx(closed_forms(beta).lap2, rel=1e-8)


@pytest.mark.parametrize("beta", [0.01, 0.3, 1.0, 2.0])
def test_contact_term(beta):
    pointwise = quadrature_oracle(beta, "lap2_realspace")
    # pointwise <xi|Lap^2 xi> misses the delta-function contribution
    assert pointwise == pytest.approx(-3 * PI * beta, rel=1e-10)
    assert abs(pointwise - closed_forms(beta).lap2) > 1.0 * beta
    measured = fourier_lap2(beta) - pointwise
    assert measured == pytest.approx(contact_lap2(beta), rel=1e-8)
    assert pointwise + contact_lap2(beta) == pytest.approx(5 * PI * beta, rel=1e-8)


@given(betas)
def test_lap_squared_norm_is_contact_free(beta):
    # |Lap xi|^2 integrated by parts equals <xi|Lap^2|xi> including the contact term
    assert quadrature_oracle(beta, "lap_sq") == pytest.approx(closed_forms(beta).lap2, rel=1e-8)


def test_ratios():
    r = closed_forms(0.4).ratios()
    assert r["inv_x"] == pytest.approx(0.4, rel=1e-14)
    assert r["lap"] == pytest.approx(-0.16, rel=1e-14)
    assert r["lap2"] == pytest.approx(5 * 0.4**4, rel=1e-14)


def test_symmetric_laplacian_coulomb_element():
    # <Lap xi | xi / x> with Lap xi = (b^2 - 2b/x) xi, by quadrature
    from scipy import integrate
    for b in (0.2, 1.0, 3.0):
        val, _ = integrate.quad(lambda x: 4 * PI * x * (b * b - 2 * b / x) * math.exp(-2 * b * x),
                                0, 60 / b, epsabs=1e-13)
        assert val == pytest.approx(closed_forms(b).lap_inv_x, rel=1e-10)
