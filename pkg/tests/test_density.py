import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besselhit import (
    DomainError,
    HittingProblem,
    UnsupportedOrderError,
    asymptotic_density,
    asymptotic_law,
    density,
    density_terms,
    mass_breakdown,
    phi_terms,
    psi_terms,
    q_kernel,
)
from besselhit.density import alpha1, power_law_constant, psi2_adaptive


def density_mpmath(a, b, nu, t, dps=30):
    """Independent high-precision Talbot inversion of the Laplace transform."""
    mp.mp.dps = dps
    a, b, nu = mp.mpf(a), mp.mpf(b), mp.mpf(nu)

    def F(lam):
        s = mp.sqrt(2 * lam)
        return (a / b) ** (-nu) * mp.besselk(nu, a * s) / mp.besselk(nu, b * s)

    return float(mp.invertlaplace(F, t, method="talbot"))


@pytest.mark.parametrize("nu", [0.5, -0.5])
def test_half_orders_are_scaled_q(nu):
    p = HittingProblem(2.0, 1.0, nu)
    t = np.geomspace(0.01, 1e3, 40)
    assert np.array_equal(density(p, t), p.c ** (-nu - 0.5) * q_kernel(t, p))


def test_minus_half_example():
    assert density(HittingProblem(2.0, 1.0, -0.5), 1.0) == 0.24197072451914337


def test_three_halves_phi1_is_constant_multiple_of_q():
    p = HittingProblem(2.0, 1.0, 1.5)
    t = np.geomspace(0.1, 100, 7)
    phi1, _ = phi_terms(p, t)
    r = phi1 / q_kernel(t, p)
    assert np.allclose(r, r[0], rtol=1e-14)
    # single zero z = -1, E = c^{-3/2} z theta_1(cz)/theta_2(z), theta_1(x) = x + 1, theta_2(x) = x^2 + 3x + 3
    c, z = 2.0, -1.0
    E = c**-1.5 * z * (c * z + 1) / (z * z + 3 * z + 3)
    assert r[0] == pytest.approx(E / -1.0, rel=1e-14)


def test_no_zero_terms_for_small_orders():
    p = HittingProblem(2.0, 1.0, 0.3)
    phi1, phi2 = phi_terms(p, [0.5, 2.0])
    assert np.all(phi1 == 0) and np.all(phi2 == 0)


def test_no_cut_terms_for_half_integers():
    p = HittingProblem(2.0, 1.0, 2.5)
    psi1, psi2 = psi_terms(p, [0.5, 2.0])
    assert np.all(psi1 == 0) and np.all(psi2 == 0)


def test_terms_recombine():
    p = HittingProblem(3.0, 1.2, 2.6)
    d = density_terms(p, np.array([0.3, 3.0, 30.0]))
    parts = (d.q_term, d.phi1, d.phi2, d.psi1, d.psi2)
    assert np.allclose(sum(k * v for k, v in zip(d.prefactors, parts)), d.f, rtol=1e-15, atol=0)
    assert d.prefactors[1] < 0 and d.prefactors[4] > 0


@pytest.mark.parametrize("a, b, nu, t", [(2, 1, 0.0, 1.0), (2, 1, 0.3, 5.0), (2, 1, -0.3, 0.4), (3, 1.2, 1.0, 2.0),
                                         (2, 1, 2.6, 1.0), (2, 1, 3.7, 3.0), (2, 1, -1.5, 2.0)])
def test_density_against_mpmath_inversion(a, b, nu, t):
    ref = density_mpmath(a, b, nu, t)
    assert float(density(HittingProblem(a, b, nu), t)) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("nu", [0.0, 0.3, -0.3, 1.0, -1.0, 1.5, 2.0, 2.6, -2.6, 3.7])
def test_density_nonnegative(nu):
    d = density_terms(HittingProblem(2.0, 1.0, nu), np.geomspace(1e-2, 1e6, 120))
    assert np.all(d.f >= -d.rounding_floor)


def test_rounding_floor_is_small_where_density_is_resolved():
    # relative rounding grows with t for large orders; it is still small at t = 100
    d = density_terms(HittingProblem(2.0, 1.0, 3.7), np.array([0.1, 1.0, 10.0, 100.0]))
    rel = d.rounding_floor / d.f
    assert np.all(np.diff(rel[1:]) > 0)
    assert rel[-1] < 1e-6 and rel[0] < 1e-12


@pytest.mark.parametrize("nu", [0.0, 0.3, 2.6, 7.3])
@pytest.mark.parametrize("t", [0.05, 1.0, 100.0, 1e5])
def test_psi2_mesh_matches_adaptive(nu, t):
    p = HittingProblem(2.0, 1.0, nu)
    _, psi2 = psi_terms(p, t)
    ref = psi2_adaptive(p, t)
    assert abs(psi2 - ref) <= 1e-11 * abs(ref)


def test_density_rejects_nonpositive_times():
    with pytest.raises(DomainError):
        density(HittingProblem(2.0, 1.0, 0.3), [1.0, 0.0])


@settings(max_examples=15)
@given(st.floats(1.1, 4.0), st.sampled_from([0.0, 0.3, -0.7, 1.0, 2.0, 2.6, 3.5]), st.floats(0.05, 50.0))
def test_scaling_property(c, nu, t):
    # tau_{ka,kb} has the law of k^2 tau_{a,b}
    k = 1.7
    f1 = float(density(HittingProblem(c, 1.0, nu), t))
    f2 = float(density(HittingProblem(k * c, k, nu), k * k * t))
    assert f2 * k * k == pytest.approx(f1, rel=1e-9, abs=1e-300)


# --- large-time laws ----------------------------------------------------------

def test_zero_order_law_value():
    p = HittingProblem(2.0, 1.0, 0.0)
    t = math.exp(10)
    assert asymptotic_density(p, t) == pytest.approx(2 * math.log(2) / (t * 100), rel=1e-15)


def test_alpha1_value():
    assert alpha1(1.0) == pytest.approx(2 * (0.5772156649015329 - math.log(2)), rel=1e-15)
    assert alpha1(1.0) == pytest.approx(-0.2318630313168248, rel=1e-14)
    assert alpha1(2.0) == pytest.approx(alpha1(1.0) + 4 * math.log(2), rel=1e-15)


def test_power_law_constant_for_03():
    p = HittingProblem(2.0, 1.0, 0.3)
    ref = (2**0.3 - 2**-0.3) / (2**0.3 * 2**0.3 * math.gamma(0.3))
    assert power_law_constant(p) == pytest.approx(ref, rel=1e-15)
    law = asymptotic_law(p)
    assert law.exponent == -1.3 and law.constant == power_law_constant(p)


@pytest.mark.parametrize("nu", [1.7, -0.7, 2.5])
def test_unsupported_orders_refused(nu):
    with pytest.raises(UnsupportedOrderError, match="supported orders"):
        asymptotic_law(HittingProblem(2.0, 1.0, nu))


def test_asymptotic_density_domain():
    with pytest.raises(DomainError):
        asymptotic_density(HittingProblem(2.0, 1.0, 0.0), 2.0)


def test_zero_order_corrected_law_improves():
    p = HittingProblem(2.0, 1.0, 0.0)
    t = np.array([1e4, 1e6, 1e8])
    f = density(p, t)
    plain = np.abs(f / asymptotic_density(p, t) - 1)
    corr = np.abs(f / asymptotic_density(p, t, corrected=True) - 1)
    assert np.all(corr < plain)
    assert np.all(np.diff(corr) < 0)


@pytest.mark.parametrize("nu", [0.3, -0.3, 0.1])
def test_power_law_ratio_tends_to_one(nu):
    # the relative correction decays like t^{-|nu|}
    p = HittingProblem(2.0, 1.0, nu)
    t = np.array([1e4, 1e6, 1e8, 1e10])
    err = np.abs(density(p, t) / asymptotic_density(p, t) - 1)
    assert np.all(np.diff(err) < 0)
    scaled = err * t**p.mu
    assert scaled[-1] == pytest.approx(scaled[-2], rel=0.1)


# --- total mass -----------------------------------------------------------------

@pytest.mark.parametrize("nu", [0.5, -0.5, 1.0, -1.0, 1.5, 2.0, 2.6, -2.5])
def test_total_mass(nu):
    mb = mass_breakdown(HittingProblem(2.0, 1.0, nu))
    assert mb.target == min(1.0, 2.0 ** (-2 * nu))
    assert mb.total == pytest.approx(mb.target, abs=1e-6)


def test_mass_breakdown_fields():
    mb = mass_breakdown(HittingProblem(2.0, 1.0, 0.3))
    assert mb.total == mb.truncated + mb.tail and mb.horizon == 1e10
    assert "closed-form" in mb.tail_rule
