r"""Special functions in double precision.

Gamma, digamma, the scaled complementary error function and the modified
Bessel functions :math:`I_\nu`, :math:`K_\nu` of real order.  The general
evaluations are delegated to the AMOS / Faddeeva implementations shipped with
:mod:`scipy.special`; this module adds the pieces those routines do not cover:

* the two boundary values of :math:`K_\nu` and :math:`I_\nu` on the negative
  real axis, via the analytic continuation formulas
  :math:`K_\nu(xe^{\pm i\pi}) = e^{\mp i\pi\nu}K_\nu(x) \mp i\pi I_\nu(x)` and
  :math:`I_\nu(xe^{\pm i\pi}) = e^{\pm i\pi\nu}I_\nu(x)`;
* the Bessel-polynomial form of half-integer orders,
  :math:`K_{n+1/2}(z) = \sqrt{\pi/(2z)}\,e^{-z}\,\theta_n(z)/z^n`;
* log-scaled variants for ratios at large argument;
* explicit errors instead of silent NaN.

:math:`K_\nu` is always evaluated at order :math:`|\nu|`, so the symmetry
:math:`K_\nu = K_{-\nu}` holds bit for bit.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import special as sc

from .errors import AccuracyWarning, BranchCutError, DomainError, EvaluationError, PoleError

EULER_GAMMA = 0.57721566490153286061


def is_half_integer(nu: float) -> bool:
    """True when ``nu - 1/2`` is an integer."""
    return float(nu - 0.5).is_integer()


def is_integer(nu: float) -> bool:
    return float(nu).is_integer()


def _check(value, what):
    if np.any(np.isnan(value)):
        raise EvaluationError(f"{what} evaluated to NaN")
    return value


def _k_order(nu: float) -> float:
    """``|nu|``, with orders below 1e-8 snapped to 0.

    ``K_nu`` is even in ``nu``, so this is exact to rounding; the AMOS
    routines return NaN for subnormal orders.
    """
    mu = abs(float(nu))
    return 0.0 if mu < 1e-8 else mu


def _as_scalar(z):
    """Return a Python float for real input, complex otherwise."""
    if isinstance(z, complex) or np.iscomplexobj(z):
        z = complex(z)
        return z
    return float(z)


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def gamma(x: float) -> float:
    x = float(x)
    if x <= 0 and x.is_integer():
        raise PoleError(f"gamma has a pole at {x}")
    if x > 171.6243769563027:
        raise OverflowError(f"gamma({x}) exceeds the double range")
    return float(_check(sc.gamma(x), "gamma"))


def digamma(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise DomainError("digamma is only provided for x > 0")
    return float(_check(sc.digamma(x), "digamma"))


def erfc_scaled(z):
    r"""Scaled complementary error function :math:`e^{z^2}\operatorname{erfc}(z)`.

    Accepts real or complex scalars and arrays.  Values outside the validated
    region ``|z| <= 30, Re z >= -5`` are returned with an :class:`AccuracyWarning`.
    """
    zz = np.asarray(z)
    if np.any(np.abs(zz) > 30) or np.any(zz.real < -5):
        warnings.warn("erfc_scaled outside |z| <= 30, Re z >= -5", AccuracyWarning, stacklevel=2)
    out = _check(sc.erfcx(zz), "erfc_scaled")
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Bessel polynomials
# ---------------------------------------------------------------------------

def reverse_bessel_coefficients(n: int) -> np.ndarray:
    r"""Coefficients of :math:`\theta_n(z)=\sum_k \frac{(n+k)!}{2^k k!(n-k)!} z^{n-k}`.

    Highest power first, ready for :func:`numpy.roots` / :func:`numpy.polyval`.
    """
    if n < 0:
        raise DomainError("polynomial degree must be non-negative")
    f = math.factorial
    return np.array([f(n + k) / (2**k * f(k) * f(n - k)) for k in range(n + 1)])


def bessel_k_half_integer(nu: float, z, side: int = 1):
    r""":math:`K_{n+1/2}(z)` from the Bessel polynomial of degree ``n = |nu| - 1/2``.

    On the negative real axis the square-root prefactor is taken on the
    ``side`` (``+1`` upper, ``-1`` lower) of the cut; elsewhere the principal
    branch is used.
    """
    if not is_half_integer(nu):
        raise DomainError(f"order {nu} is not a half integer")
    n = int(round(abs(nu) - 0.5))
    z = complex(z)
    if z == 0:
        raise DomainError("K is singular at z = 0")
    if z.imag == 0 and z.real < 0:
        sqrt_z = 1j * side * math.sqrt(-z.real)
    else:
        sqrt_z = np.sqrt(z)
    poly = np.polyval(reverse_bessel_coefficients(n), z) / z**n
    return complex(_check(math.sqrt(math.pi / 2) / sqrt_z * np.exp(-z) * poly, "K half-integer"))


# ---------------------------------------------------------------------------
# Modified Bessel functions
# ---------------------------------------------------------------------------

def _on_negative_axis(z) -> bool:
    return isinstance(z, (float, complex)) and complex(z).imag == 0 and complex(z).real < 0


def bessel_i(nu: float, z, side: int | None = None):
    r"""Modified Bessel function of the first kind :math:`I_\nu(z)`.

    Real positive arguments (scalar or array) give real results.  On the
    negative real axis integer orders are entire; other orders need ``side``
    to select the boundary value :math:`I_\nu(|z|e^{\pm i\pi})`.
    """
    if isinstance(z, np.ndarray):
        return _check(sc.iv(nu, z), "I")
    z = _as_scalar(z)
    if _on_negative_axis(z):
        x = -complex(z).real
        if is_integer(nu):
            return float(_check(sc.iv(nu, -x), "I"))
        if side not in (1, -1):
            raise BranchCutError(f"I_{nu} is cut along the negative real axis; pass side=+1 or -1")
        return complex(np.exp(1j * side * math.pi * nu) * _check(sc.iv(nu, x), "I"))
    if isinstance(z, float):
        if z == 0 and nu < 0 and not is_integer(nu):
            raise DomainError(f"I_{nu}(0) is infinite")
        return float(_check(sc.iv(nu, z), "I"))
    return complex(_check(sc.iv(nu, z), "I"))


def bessel_k(nu: float, z, side: int | None = None):
    r"""Macdonald function :math:`K_\nu(z)` for real order.

    Parameters
    ----------
    nu : float
        Order; only ``|nu|`` is used.
    z : float, complex or ndarray
        Argument with ``|arg z| < pi``.  Arrays are passed straight to the
        vectorised backend.
    side : {+1, -1, None}
        On the negative real axis, the side of the cut to take the limit
        from.  Half-integer orders default to ``+1`` (the Bessel-polynomial
        route); other orders raise :class:`BranchCutError` without it.
    """
    mu = _k_order(nu)
    if isinstance(z, np.ndarray):
        if np.any(z == 0):
            raise DomainError("K is singular at z = 0")
        return _check(sc.kv(mu, z), "K")
    z = _as_scalar(z)
    if z == 0:
        raise DomainError("K is singular at z = 0")
    if _on_negative_axis(z):
        s = 1 if side is None else side
        if is_half_integer(mu):
            return bessel_k_half_integer(mu, complex(z), side=s)
        if side not in (1, -1):
            raise BranchCutError(f"K_{nu} is cut along the negative real axis; pass side=+1 or -1")
        x = -complex(z).real
        val = np.exp(-1j * s * math.pi * mu) * sc.kv(mu, x) - 1j * s * math.pi * sc.iv(mu, x)
        return complex(_check(val, "K"))
    if isinstance(z, float):
        return float(_check(sc.kv(mu, z), "K"))
    return complex(_check(sc.kv(mu, z), "K"))


def log_bessel_k(nu: float, z):
    r"""Principal-value :math:`\log K_\nu(z)` without overflow.

    Real for real positive ``z`` (scalar or array); complex otherwise, where
    the imaginary part is the phase modulo :math:`2\pi`.
    """
    mu = _k_order(nu)
    if isinstance(z, np.ndarray) and not np.iscomplexobj(z):
        return _check(np.log(sc.kve(mu, z)) - z, "log K")
    if isinstance(z, (int, float)):
        return float(_check(math.log(sc.kve(mu, z)) - z, "log K"))
    z = np.asarray(z, dtype=complex)
    out = _check(np.log(sc.kve(mu, z)) - z, "log K")
    return complex(out) if out.ndim == 0 else out


def log_bessel_i(nu: float, z):
    r"""Principal-value :math:`\log I_\nu(z)` without overflow (see :func:`log_bessel_k`)."""
    if isinstance(z, np.ndarray) and not np.iscomplexobj(z):
        return _check(np.log(sc.ive(nu, z)) + z, "log I")
    if isinstance(z, (int, float)):
        return float(_check(math.log(sc.ive(nu, z)) + z, "log I"))
    z = np.asarray(z, dtype=complex)
    out = _check(np.log(sc.ive(nu, z)) + np.abs(z.real), "log I")
    return complex(out) if out.ndim == 0 else out


def bessel_k_scaled(nu: float, z):
    r""":math:`e^{z}K_\nu(z)`, the form used for ratios at large ``|z|``."""
    out = _check(sc.kve(_k_order(nu), z), "scaled K")
    return out[()] if np.ndim(out) == 0 else out


def bessel_k_derivative(nu: float, z):
    r""":math:`K_\nu'(z) = -(K_{\nu-1}(z) + K_{\nu+1}(z))/2`."""
    return -0.5 * (bessel_k(nu - 1, z) + bessel_k(nu + 1, z))
