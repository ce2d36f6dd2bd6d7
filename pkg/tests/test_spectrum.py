import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from twofermion.constants import CouplingConfig, Unit
from twofermion.spectrum import (
    SingularDenominatorError,
    eigenstate_report,
    mass_derived,
    mass_discrepancy_report,
    mass_printed,
    rest_frame_residual,
    solve_states,
)

ALPHA = 1 / 137


def test_report_closed_form_deep():
    cfg = CouplingConfig()
    st_ = eigenstate_report(-2 * ALPHA, 1.0, "closed_form_deep", "closed_form", cfg=cfg)
    assert st_.binding_energy.value == pytest.approx(2 * (1 + ALPHA) * cfg.electron_rest_energy, rel=1e-14)
    assert st_.radius.unit is Unit.COMPTON_LENGTH and st_.radius.value == 1.0
    assert st_.class_violations() == []


def test_report_positronium():
    st_ = eigenstate_report(1.99998669, 3.64769e-3, "positronium_1s", "variational", "derived")
    assert st_.binding_energy.value == pytest.approx(6.80, abs=0.01)
    assert st_.radius.unit is Unit.BOHR_RADIUS
    # alpha = 1/137 gives 2.00107; the quoted 2.00054 corresponds to alpha = 1/137.036
    assert st_.radius.value == pytest.approx(2.0005, rel=1e-3)
    assert st_.class_violations() == []


def test_report_threshold():
    st_ = eigenstate_report(2.0, 0.3, "positronium_1s", "variational")
    assert st_.binding_energy.value == 0.0
    assert st_.class_violations()  # zero binding is not a bound 1s state


def test_report_validation():
    with pytest.raises(ValueError):
        eigenstate_report(1.9, 0.1, "3p", "variational")
    with pytest.raises(ValueError):
        eigenstate_report(1.9, 0.0, "deep", "variational")


def _printed_retyped(E, b, a):
    # same expression with numerator and denominator multiplied through by 12 E
    num = 16 * E**4 * (1 + b * b) + 24 * E**3 * a * b - 12 * E * E * (1 + 2 * b * b + 5 * b**4)
    den = (40 * a * b * E * E - 32 * a * b - 3 * E**5 + 4 * E * (7 + 8 * b * b)
           - 16 * E * (1 + 2 * b * b) - 80 * E * b**4)
    return 2 * num / den


@settings(max_examples=100)
@given(st.floats(-3, 3).filter(lambda e: abs(e) > 1e-2), st.floats(1e-3, 2.0))
def test_printed_transcription(E, beta):
    try:
        got = mass_printed(E, beta, ALPHA).m_s_over_m
    except SingularDenominatorError:
        return
    ref = _printed_retyped(E, beta, ALPHA)
    assert got == pytest.approx(ref, rel=1e-10)


def test_printed_threshold_is_not_two():
    # beta -> 0 at E = 2: numerator 32/3 - 2, denominator -4 + 1
    val = mass_printed(2.0, 1e-9, ALPHA).m_s_over_m
    assert val == pytest.approx(2 * (26 / 3) / (-3), rel=1e-7)


def test_printed_at_deep_state_is_finite():
    assert math.isfinite(mass_printed(-7.94318e-3, 0.725625, ALPHA).m_s_over_m)


def _derived_formula(E, b, a):
    num = 0.75 * E**3 * (1 + b * b) - E * (1 + 2 * b * b + 5 * b**4) + 2 * a * E * E * b
    den = (-4 / 3 + 7 / 3 * E * E - E**4 / 4 - 8 / 3 * b * b * (1 - E * E) - 20 / 3 * b**4
           + b / 3 * (10 * a * E - 8 * a / E))
    return 2 * num / den


@settings(max_examples=100)
@given(st.floats(-3, 3).filter(lambda e: abs(e) > 1e-2), st.floats(1e-3, 2.0))
def test_derived_matches_closed_expression(E, beta):
    try:
        got = mass_derived(E, beta, ALPHA)
    except SingularDenominatorError:
        return
    assert got.m_s_over_m == pytest.approx(_derived_formula(E, beta, ALPHA), rel=1e-9)
    assert got.formula_variant == "derived"


def test_derived_threshold():
    assert mass_derived(2.0, 1e-6, ALPHA).m_s_over_m == pytest.approx(2.0, rel=1e-6)


def test_derived_reference_values():
    m1 = mass_derived(1.99998669, 3.64769e-3, ALPHA).m_s_over_m
    m2 = mass_derived(-7.94318e-3, 0.725625, ALPHA).m_s_over_m
    assert m1 == pytest.approx(1.99995121, rel=1e-3)
    assert m2 / 2 == pytest.approx(-0.0097293, rel=2e-2)


def test_singular_denominator():
    beta = 0.1

    def den(E):
        b = beta
        return (-4 / 3 + 7 / 3 * E * E - E**4 / 4 - 8 / 3 * b * b * (1 - E * E) - 20 / 3 * b**4
                + b / 3 * (10 * ALPHA * E - 8 * ALPHA / E))

    root = brentq(den, 0.5, 1.5, xtol=1e-16)
    with pytest.raises(SingularDenominatorError):
        mass_derived(root, beta, ALPHA)


def test_mass_domain():
    with pytest.raises(ValueError):
        mass_derived(0.0, 0.1, ALPHA)
    with pytest.raises(ValueError):
        mass_printed(1.0, 0.0, ALPHA)


@pytest.mark.parametrize("E, beta", [(1.99998669, 3.64769e-3), (-7.94318e-3, 0.725625), (1.5, 0.4)])
def test_derived_continuity(E, beta):
    base = mass_derived(E, beta, ALPHA).m_s_over_m
    for dE, db in ((1e-9, 0), (0, 1e-9), (-1e-9, 1e-9)):
        near = mass_derived(E + dE, beta + db, ALPHA).m_s_over_m
        assert abs(near - base) <= 1e-5 * max(1.0, abs(base))


def test_rest_frame_residual_reported():
    r = rest_frame_residual(1.99998668, 3.64966e-3, ALPHA)
    assert set(r) == {"kinetic_term", "coulomb_term", "residual", "relative_residual"}
    assert math.isfinite(r["residual"]) and r["relative_residual"] < 1e-6


def test_solve_states_shape():
    states, minima, errors = solve_states()
    assert errors == []
    assert len(minima) == 4
    labels = [(s.label, s.variant) for s in states]
    assert ("closed_form_1s", "not_applicable") in labels
    assert ("deep", "derived") in labels and ("deep", "printed") in labels


@pytest.fixture(scope="module")
def report():
    return mass_discrepancy_report()


def test_report_shape(report):
    assert len(report["states"]) >= 4
    assert len(report["cubic_minima"]) == 4
    assert report["matching_cubic_variants"] == ["derived"]


def test_report_derived_rows(report):
    rows = {(r["label"], r["variant"]): r for r in report["states"]}
    r1 = rows[("positronium_1s", "derived")]
    assert r1["mass_derived"] == pytest.approx(1.99995121, rel=1e-3)
    assert "mass_derived" in r1["matching_mass_formulas"]
    assert "mass_printed" not in r1["matching_mass_formulas"]
    rd = rows[("deep", "derived")]
    assert "mass_derived" in rd["matching_mass_formulas"]


def test_report_coefficient_column(report):
    for r in report["states"]:
        assert r["c1_derived_minus_printed"] == pytest.approx(r["c1_difference_expected"], rel=1e-9, abs=1e-15)
