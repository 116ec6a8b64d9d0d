import csv
import math
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from besselhit import specfun
from besselhit.errors import AccuracyWarning, BranchCutError, DomainError, PoleError

DATA = Path(__file__).parent / "data" / "besselk_table.csv"


# -- gamma family -----------------------------------------------------------

@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 1.0), (0.5, 1.7724538509055160), (2.5, 1.3293403881791370)],
)
def test_gamma_values(x, expected):
    assert specfun.gamma(x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("x", [1e-3, 0.37, 3.3, 17.5, 101.2, 170.0])
def test_gamma_matches_mpmath(x):
    assert specfun.gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        specfun.gamma(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        specfun.gamma(172.0)


def test_digamma_values():
    assert specfun.digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-15)
    assert specfun.digamma(2.0) == pytest.approx(0.4227843350984671, rel=1e-15)


def test_digamma_recurrence_oracle():
    # psi(10) from psi(1) by psi(x+1) = psi(x) + 1/x
    ref = -specfun.EULER_GAMMA + sum(1.0 / k for k in range(1, 10))
    assert specfun.digamma(10.0) == pytest.approx(ref, rel=1e-12)


def test_digamma_domain():
    with pytest.raises(DomainError):
        specfun.digamma(0.0)


# -- erfcx ------------------------------------------------------------------

def test_erfc_scaled_values():
    assert specfun.erfc_scaled(0.0) == 1.0
    # e * (2/sqrt(pi)) * int_1^inf exp(-s^2) ds by quadrature
    ref = float(mp.e * 2 / mp.sqrt(mp.pi) * mp.quad(lambda s: mp.exp(-s * s), [1, mp.inf]))
    assert ref == pytest.approx(0.42758357615580705, rel=1e-15)
    assert specfun.erfc_scaled(1.0) == pytest.approx(ref, rel=1e-14)


def test_erfc_scaled_large_argument():
    x = 25.0
    assert specfun.erfc_scaled(x) * x * math.sqrt(math.pi) == pytest.approx(1.0, abs=1e-3)


@given(st.floats(-5, 20), st.floats(-20, 20))
def test_erfc_scaled_complex_matches_mpmath(x, y):
    z = complex(x, y)
    ref = complex(mp.exp(mp.mpc(z) ** 2) * mp.erfc(mp.mpc(z)))
    assert abs(specfun.erfc_scaled(z) - ref) <= 1e-12 * abs(ref)


def test_erfc_scaled_warns_outside_region():
    with pytest.warns(AccuracyWarning):
        specfun.erfc_scaled(-6.0)


# -- Bessel I / K -----------------------------------------------------------

def test_bessel_i_values():
    assert specfun.bessel_i(0, 0.0) == 1.0
    assert specfun.bessel_i(0, 1.0) == pytest.approx(1.2660658777520084, rel=1e-15)


@pytest.mark.parametrize("x", [0.01, 0.7, 3.0, 20.0])
def test_bessel_i_half_integer_closed_form(x):
    assert specfun.bessel_i(0.5, x) == pytest.approx(math.sqrt(2 / (math.pi * x)) * math.sinh(x), rel=1e-13)


def test_bessel_k_values():
    assert specfun.bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-15)
    assert specfun.bessel_k(0, 1.0) == pytest.approx(0.4210244382407085, rel=1e-15)
    assert abs(specfun.bessel_k(1.5, -1.0)) < 1e-16


def test_bessel_k_domain_and_cut():
    with pytest.raises(DomainError):
        specfun.bessel_k(1.0, 0.0)
    with pytest.raises(BranchCutError):
        specfun.bessel_k(0.3, -2.0)
    with pytest.raises(BranchCutError):
        specfun.bessel_i(0.3, -2.0)


def test_bessel_k_cut_boundary_values_match_mpmath():
    # Limits from above and below the cut.
    for nu in (0.3, 2.6):
        for side in (1, -1):
            z = mp.mpc(-2.0, side * 1e-30)
            ref = complex(mp.besselk(nu, z))
            got = specfun.bessel_k(nu, -2.0, side=side)
            assert abs(got - ref) <= 1e-12 * abs(ref)


def _table():
    with DATA.open() as fh:
        for r in csv.DictReader(fh):
            z = complex(float(r["re_z"]), float(r["im_z"]))
            yield float(r["nu"]), z, complex(float(r["re_K"]), float(r["im_K"]))


def test_bessel_k_regression_table():
    worst = 0.0
    for nu, z, ref in _table():
        got = specfun.bessel_k(nu, z)
        worst = max(worst, abs(got - ref) / abs(ref))
    assert worst <= 1e-11


orders = st.floats(-3, 3, allow_nan=False)
reals = st.floats(0.01, 50)


@given(orders, reals)
def test_symmetry_exact(nu, x):
    assert specfun.bessel_k(nu, x) == specfun.bessel_k(-nu, x)
    z = complex(x, 0.7 * x)
    assert specfun.bessel_k(nu, z) == specfun.bessel_k(-nu, z)


@given(orders, reals)
def test_wronskian(nu, x):
    i0, i1 = specfun.bessel_i(nu, x), specfun.bessel_i(nu + 1, x)
    k0, k1 = specfun.bessel_k(nu, x), specfun.bessel_k(nu + 1, x)
    t1, t2 = i0 * k1, i1 * k0
    # Both products are positive for nu >= 0, where this is the plain 1e-11
    # relative bound; for negative orders they cancel and rounding scales with them.
    assert abs(t1 + t2 - 1 / x) <= 1e-11 * max(1 / x, abs(t1) + abs(t2))
    if nu >= 0:
        assert t1 + t2 == pytest.approx(1 / x, rel=1e-11)


@given(st.floats(-3, 0), st.floats(0.01, 50))
def test_negative_order_i_matches_mpmath(nu, x):
    ref = float(mp.besseli(nu, x))
    assert abs(specfun.bessel_i(nu, x) - ref) <= 1e-12 * abs(ref) + 1e-300


@given(st.floats(-9, 9), st.floats(0.05, 60), st.floats(-3.0, 3.0))
def test_recurrence(nu, r, theta):
    z = r * complex(math.cos(theta), math.sin(theta))
    kp, km, k0 = specfun.bessel_k(nu + 1, z), specfun.bessel_k(nu - 1, z), specfun.bessel_k(nu, z)
    scale = abs(kp) + abs(km) + abs(2 * nu / z * k0)
    assert abs(kp - km - 2 * nu / z * k0) <= 1e-10 * scale


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5, 3.5])
@pytest.mark.parametrize("x", [1e-3, 0.2, 1.0, 6.0, 40.0])
def test_half_integer_polynomial_route(nu, x):
    assert specfun.bessel_k_half_integer(nu, x).real == pytest.approx(specfun.bessel_k(nu, x), rel=1e-11)


def test_half_integer_polynomial_coefficients():
    np.testing.assert_array_equal(specfun.reverse_bessel_coefficients(2), [1.0, 3.0, 3.0])
    np.testing.assert_array_equal(specfun.reverse_bessel_coefficients(3), [1.0, 6.0, 15.0, 15.0])


@given(st.floats(0, 5), st.floats(0.1, 700))
def test_log_bessel_k_consistent(nu, x):
    lk = specfun.log_bessel_k(nu, x)
    ref = float(mp.log(mp.besselk(nu, x)))
    assert lk == pytest.approx(ref, rel=1e-12, abs=1e-12)


@given(st.floats(0, 5), st.floats(0.1, 700))
def test_log_bessel_i_consistent(nu, x):
    ref = float(mp.log(mp.besseli(nu, x)))
    assert specfun.log_bessel_i(nu, x) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_bessel_k_derivative():
    nu, z = 1.3, 0.8 + 0.4j
    ref = complex(mp.diff(lambda s: mp.besselk(nu, s), mp.mpc(z)))
    assert abs(specfun.bessel_k_derivative(nu, z) - ref) <= 1e-12 * abs(ref)


@given(st.floats(0.1, 5), st.floats(0.01, 3), st.floats(0.05, 4))
def test_q_laplace_identity(a_minus_b, b, lam):
    from besselhit.hitting_kernels import HittingProblem, q_kernel
    from besselhit.quadrature import adaptive_gauss

    p = HittingProblem(b + a_minus_b, b, 0.0)
    lo, hi = math.log(a_minus_b**2 / 1500), math.log(2000 / lam)

    def g(s):
        t = np.exp(s)
        return np.exp(-lam * t) * q_kernel(t, p) * t

    val, _ = adaptive_gauss(g, np.linspace(lo, hi, 40), epsrel=1e-12, epsabs=1e-16)
    assert val == pytest.approx(math.exp(-a_minus_b * math.sqrt(2 * lam)), rel=1e-9)
