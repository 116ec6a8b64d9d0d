import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from besselhit import DomainError, certify_zeros, find_zeros, zero_count
from besselhit import specfun

GRID = [0.0, 0.3, -0.3, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, 2.5, 2.6, 3.5, 3.7, 5.2, 7.3]


@pytest.mark.parametrize("nu, n", [(0, 0), (0.3, 0), (0.5, 0), (1.0, 0), (1.5, 1), (2.0, 2), (2.5, 2),
                                   (2.6, 2), (3.5, 3), (3.7, 4), (-3.7, 4), (4.4, 4), (4.6, 4), (6.0, 6)])
def test_zero_count_rule(nu, n):
    assert zero_count(nu) == n


def test_zero_count_rejects_nonfinite():
    with pytest.raises(DomainError):
        zero_count(math.inf)


def test_three_halves_has_the_single_zero_minus_one():
    zs = find_zeros(1.5)
    assert zs.zeros == (-1 + 0j,)
    assert zs.real == (0,)


def test_five_halves_closed_form():
    z = find_zeros(2.5).as_array()
    assert np.allclose(sorted(z.imag), [-math.sqrt(3) / 2, math.sqrt(3) / 2], rtol=0, atol=1e-15)
    assert np.all(z.real == -1.5)


@pytest.mark.parametrize("nu", GRID)
def test_certificate_matches_rule(nu):
    zs = find_zeros(nu)
    assert zs.certificate.ok, zs.certificate.message
    assert zs.certificate.count == zero_count(nu) == len(zs)


@pytest.mark.parametrize("nu", [1.5, 2.0, 2.6, 3.5, 3.7])
def test_dropping_a_zero_fails_certification(nu):
    zs = find_zeros(nu)
    assert not certify_zeros(zs.without(0)).ok


@pytest.mark.parametrize("nu", GRID)
def test_zeros_in_left_half_plane_and_conjugate_closed(nu):
    zs = find_zeros(nu)
    z = zs.as_array()
    assert np.all(z.real < 0)
    for i, j in zs.pairs:
        assert z[j] == np.conj(z[i])
        assert z[i].imag > 0
    assert len(zs.pairs) * 2 + len(zs.real) == len(zs)


@pytest.mark.parametrize("nu", [2.0, 2.6, 3.7, -5.2, 7.3])
def test_zeros_are_zeros_of_k_in_mpmath(nu):
    mp.mp.dps = 30
    for z in find_zeros(nu):
        v = mp.besselk(abs(nu), mp.mpc(z.real, z.imag))
        dv = mp.diff(lambda s: mp.besselk(abs(nu), s), mp.mpc(z.real, z.imag))
        assert abs(v / dv) < 1e-12


@pytest.mark.parametrize("n", range(1, 10))
def test_half_integer_zeros_match_polynomial_roots(n):
    ours = np.sort_complex(find_zeros(n + 0.5).as_array())
    roots = np.sort_complex(np.roots(specfun.reverse_bessel_coefficients(n)))
    assert np.max(np.abs(ours - roots)) < 1e-10


def test_negative_order_shares_zeros():
    assert find_zeros(-2.6).zeros == find_zeros(2.6).zeros
    assert find_zeros(-2.6).nu == -2.6


def test_order_bound():
    with pytest.raises(DomainError):
        find_zeros(10.5)


@given(st.floats(min_value=0.0, max_value=6.0).filter(lambda v: abs((v - 0.5) / 2 % 1 - 0.5) > 0.02))
def test_count_and_geometry_property(nu):
    # orders too close to an odd-integer-plus-1/2 would put a pair on the cut
    zs = find_zeros(nu)
    assert len(zs) == zero_count(nu)
    assert all(z.real < 0 for z in zs)
