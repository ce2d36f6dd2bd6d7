"""Cross-validation of every closed form against an independent numerical route.

Used by ``twofermion check``. ``perturb`` scales the closed-form constants
before comparison so the suite can be shown to fail on a broken build.
"""
from __future__ import annotations

import numpy as np

from . import kinematics as kin
from .cubic import CubicCoefficients, Variant, assemble, assemble_from_operators, \
    assemble_from_pointwise, amplitude_residual, closed_form_states, coulomb_residual
from .matrix_elements import closed_forms, contact_lap2, fourier_lap2, quadrature_oracle
from .roots import bisection_roots, cubic_real_roots

SEED = 20240607


def _result(name, passed, **detail):
    return {"name": name, "passed": bool(passed), **detail}


def random_monic_cubics(n: int, rng) -> list:
    """Monic cubics with well-separated real roots, or one real root and a
    complex pair, so the sign-change oracle is well conditioned."""
    out = []
    while len(out) < n:
        if rng.random() < 0.7:
            r = np.sort(rng.uniform(-4.0, 4.0, 3))
            if np.min(np.diff(r)) < 0.1:
                continue
            c = np.poly(r)
        else:
            re, im = rng.uniform(-3.0, 3.0), rng.uniform(0.2, 3.0)
            c = np.poly([rng.uniform(-4.0, 4.0), complex(re, im), complex(re, -im)]).real
        out.append(CubicCoefficients(c[1], c[2], c[3], beta=float("nan"), alpha=float("nan"),
                                     variant=Variant.DERIVED))
    return out


def check_matrix_elements(perturb=0.0, betas=None):
    betas = np.geomspace(1e-3, 2.0, 20) if betas is None else betas
    worst = 0.0
    for b in betas:
        me = closed_forms(float(b))
        for name in ("norm", "inv_x", "lap"):
            ref = getattr(me, name) * (1.0 + perturb)
            worst = max(worst, abs(quadrature_oracle(float(b), name) - ref) / abs(ref))
    return _result("matrix_elements_vs_quadrature", worst <= 1e-8, max_rel_err=worst)


def check_fourier_lap2(perturb=0.0):
    worst, contact = 0.0, 0.0
    for b in (0.01, 0.5, 1.0, 2.0):
        ref = closed_forms(b).lap2 * (1.0 + perturb)
        worst = max(worst, abs(fourier_lap2(b) - ref) / ref)
        gap = fourier_lap2(b) - quadrature_oracle(b, "lap2_realspace")
        contact = max(contact, abs(gap - contact_lap2(b)) / contact_lap2(b))
    return _result("fourier_lap2_and_contact_term", worst <= 1e-8 and contact <= 1e-8,
                   max_rel_err=worst, contact_rel_err=contact)


def check_cubic_roots(n=100, seed=SEED):
    rng = np.random.default_rng(seed)
    worst, mismatched = 0.0, 0
    for c in random_monic_cubics(n, rng):
        got = cubic_real_roots(c).roots
        ref = bisection_roots(c)
        if len(got) != len(ref):
            mismatched += 1
            continue
        worst = max(worst, max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(got, ref)))
    return _result("cubic_roots_vs_bisection", mismatched == 0 and worst <= 1e-10,
                   max_err=worst, count_mismatches=mismatched)


def check_derived_cubic(perturb=0.0, n=50, seed=SEED):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a, b in zip(rng.uniform(1e-3, 0.5, n), rng.uniform(1e-3, 2.0, n)):
        ref = assemble(a, b, "derived")
        for route in (assemble_from_pointwise, assemble_from_operators):
            got = route(a, b)
            worst = max(worst, max(abs(x - y * (1.0 + perturb)) / max(1.0, abs(y))
                                   for x, y in zip(got.as_tuple()[1:], ref.as_tuple()[1:])))
    return _result("derived_cubic_from_matrix_elements", worst <= 1e-12, max_err=worst)


def check_closed_forms(alpha=1.0 / 137.0):
    worst = 0.0
    for st in closed_form_states(alpha):
        worst = max(worst, abs(amplitude_residual(st.E, st.beta)),
                    abs(coulomb_residual(st.E, st.beta, alpha)))
    return _result("closed_form_residuals", worst <= 1e-12, max_residual=worst)


def check_l2_forms(n=1000, seed=SEED):
    rng = np.random.default_rng(seed)
    worst, done = 0.0, 0
    while done < n:
        p, q = rng.normal(size=3), rng.normal(size=3)
        m1, m2 = rng.uniform(0.5, 2.0, 2)
        E = rng.uniform(-6.0, 6.0)
        e1, e2 = kin.eps(p, m1), kin.eps(q, m2)
        if min(abs(E - pole) for pole in kin.l2_poles(p, q, m1, m2)) < 1e-3:
            continue
        rational = kin.l2(p, q, E, m1, m2).value
        pole_sum = kin.l2_pole_sum(E, e1, e2, m1, m2)
        worst = max(worst, abs(rational - pole_sum) / abs(pole_sum))
        done += 1
    return _result("l2_rational_vs_pole_sum", worst <= 1e-12, max_rel_err=worst)


def check_l2_residues(perturb=0.0, n=100, seed=SEED):
    rng = np.random.default_rng(seed)
    worst, nonpositive = 0.0, 0
    for _ in range(n):
        p, q = rng.normal(size=3), rng.normal(size=3)
        m1, m2 = rng.uniform(0.5, 2.0, 2)
        res = kin.l2_residues(p, q, m1, m2)
        amp = m1 * m2 / (kin.eps(p, m1) * kin.eps(q, m2)) * (1.0 + perturb)
        nonpositive += sum(r <= 0.0 for r in res.residues + res.numeric_residues)
        for r in res.residues + res.numeric_residues:
            worst = max(worst, abs(r - amp) / amp)
    return _result("l2_residues_equal_positive", nonpositive == 0 and worst <= 1e-6,
                   max_rel_err=worst, nonpositive=nonpositive)


def expansion_scaling(s=(0.6, -0.3, 0.8), direction=(0.3, 0.5, 0.8), n=10):
    """Largest identity residual at ``n`` log-spaced ``|g|`` in ``[1e-3, 1e-1]``."""
    d = np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    gs = np.geomspace(1e-3, 1e-1, n)
    worst = [max(kin.solve_f(s, gm * d).identity_residuals) for gm in gs]
    return gs, np.array(worst)


def check_expansion_order():
    gs, worst = expansion_scaling()
    slope = kin.loglog_slope(gs, worst)
    return _result("expansion_identities_order", slope >= 2.7, loglog_slope=slope)


def run_checks(perturb: float = 0.0) -> list:
    return [
        check_matrix_elements(perturb),
        check_fourier_lap2(perturb),
        check_derived_cubic(perturb),
        check_closed_forms(),
        check_cubic_roots(),
        check_l2_forms(),
        check_l2_residues(perturb),
        check_expansion_order(),
    ]


def all_passed(results) -> bool:
    return all(r["passed"] for r in results)

