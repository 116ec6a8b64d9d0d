r"""The ratio :math:`K_\nu(cw)/K_\nu(w)` computed directly and through its pole/cut decomposition.

For :math:`c>1`, :math:`\mu=|\nu|` and :math:`|\arg w|<\pi`,

.. math::
    \frac{K_\nu(cw)}{K_\nu(w)} = e^{-(c-1)w}\Big[c^{-\mu}
      - \sum_j \frac{w\,E_j}{z_j(w-z_j)}
      - \int_0^\infty \frac{w\,e^{-(c-1)x}L_{\mu,c}(x)}{x(x+w)}\,dx\Big],
    \qquad E_j = e^{(c-1)z_j}\frac{K_\mu(cz_j)}{K_{\mu+1}(z_j)},

where :math:`z_j` are the zeros of :math:`K_\mu`.  The sum is empty for
:math:`\mu<3/2` and the integral vanishes for half-integer :math:`\mu`.
At a zero :math:`K_{\mu+1}(z_j) = K_{\mu-1}(z_j)`, so writing the summand with
:math:`K_{\nu+1}` gives the same value for negative :math:`\nu`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specfun
from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import adaptive_gauss
from .hitting_kernels import HittingProblem, L_kernel_scaled, L_smallx_constant
from .macdonald_zeros import MacdonaldZeroSet, find_zeros

# The scaled kernel decays like exp(-2x); at x = 40 it is below 1e-34.
X_MAX = 40.0
POLE_DISTANCE = 1e-6


@dataclass(frozen=True)
class RatioDecomposition:
    """Pieces of the decomposed ratio.

    ``total = leading - exp(-(c-1)w) * (zero_sum + integral_term)``.
    """

    leading: complex
    zero_sum: complex
    integral_term: complex
    total: complex


def _validate_w(w) -> complex:
    w = complex(w)
    if w == 0:
        raise DomainError("w must be nonzero")
    if w.imag == 0 and w.real < 0:
        raise DomainError("w must satisfy |arg w| < pi")
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("w must be finite")
    return w


def ratio_direct(p: HittingProblem, w) -> complex:
    """``K_nu(c w) / K_nu(w)`` from exponentially scaled Bessel values."""
    w = _validate_w(w)
    mu, c = p.mu, p.c
    den = complex(specfun.bessel_k_scaled(mu, w))
    scale = abs(specfun.bessel_k_scaled(mu, abs(w)))
    if not abs(den) > 1e-13 * scale:
        raise PoleError(f"K_{mu}(w) vanishes to working precision at w={w}")
    num = complex(specfun.bessel_k_scaled(mu, c * w))
    return complex(num / den * np.exp(-(c - 1) * w))


# ---------------------------------------------------------------------------
# Zero-sum weights
# ---------------------------------------------------------------------------

def _half_integer_weight(mu: float, c: float, z: complex) -> complex:
    n = int(round(mu - 0.5))
    num = np.polyval(specfun.reverse_bessel_coefficients(n), c * z)
    den = np.polyval(specfun.reverse_bessel_coefficients(n + 1), z)
    return c ** (-0.5 - n) * z * num / den


@lru_cache(maxsize=256)
def zero_weights(mu: float, c: float) -> tuple[MacdonaldZeroSet, tuple[complex, ...]]:
    r"""Zeros :math:`z_j` of :math:`K_\mu` and the weights :math:`E_j`.

    Conjugate zeros get exactly conjugate weights.
    """
    mu = abs(float(mu))
    zset = find_zeros(mu)
    weights: list[complex] = [0j] * len(zset)
    half = specfun.is_half_integer(mu)
    for k, z in enumerate(zset.zeros):
        if z.imag < 0:
            continue
        if half:
            e = _half_integer_weight(mu, c, z)
        else:
            e = complex(specfun.bessel_k_scaled(mu, c * z)) / complex(specfun.bessel_k_scaled(mu + 1, z))
        weights[k] = complex(e.real, 0.0) if z.imag == 0 else complex(e)
    for i, j in zset.pairs:
        weights[j] = weights[i].conjugate()
    return zset, tuple(weights)


def zero_sum(p: HittingProblem, w) -> complex:
    r""":math:`\sum_j w E_j / (z_j (w - z_j))`; zero when there are no zeros."""
    w = _validate_w(w)
    zset, weights = zero_weights(p.mu, p.c)
    total = 0j
    for z, e in zip(zset.zeros, weights):
        if abs(w - z) < POLE_DISTANCE:
            raise PoleError(f"w={w} is within {POLE_DISTANCE} of the zero {z}")
        total += w * e / (z * (w - z))
    return total


# ---------------------------------------------------------------------------
# Branch-cut integral
# ---------------------------------------------------------------------------

def ratio_integrand(p: HittingProblem, w, x):
    r""":math:`w e^{-(c-1)x} L_{\mu,c}(x) / (x(x+w))`, vectorised in ``x``.

    Near ``x = 0`` it behaves like :math:`x^{2\mu-1}` for :math:`\mu>0` and like
    :math:`1/(x\log^2 x)` for :math:`\mu=0`; at large ``x`` it decays like
    :math:`e^{-2x}/x^2`.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("integrand needs x > 0")
    w = complex(w)
    out = w * L_kernel_scaled(p.mu, p.c, x) / (x * (x + w))
    return out[()] if np.ndim(out) == 0 else out


def _lower_cutoff(mu: float, w: complex | None) -> float:
    s = 1.0 if w is None else min(1.0, abs(w))
    if mu == 0:
        return 1e-10 * s
    return max(1e-300, min(1e-10 * s, 10.0 ** (-16.0 / (2 * mu))))


def _small_x_tail(mu: float, c: float, eps: float) -> float:
    r""":math:`\int_0^\varepsilon L_{\mu,c}(x)\,dx/x` from the small-``x`` law."""
    if mu == 0:
        u = math.log(eps / 2) + specfun.EULER_GAMMA
        return math.log(c) / math.pi * (math.atan(u / math.pi) + math.pi / 2)
    return L_smallx_constant(mu, c) * eps ** (2 * mu) / (2 * mu)


def _mesh(mu: float, w, lo: float, hi: float) -> list[float]:
    """Unit-width panels in ``log x`` plus breakpoints at ``log|w|`` and the zero abscissae."""
    pts = set(np.arange(np.ceil(lo), hi).tolist())
    if w is not None:
        pts.add(math.log(abs(w)))
    if mu >= 1.5:
        zset = find_zeros(mu)
        pts.update(math.log(-z.real) for z in zset.zeros if z.real < 0)
    return [lo, *sorted(v for v in pts if lo < v < hi), hi]


def cut_integral(p: HittingProblem, w=None, epsrel: float = 1e-12) -> complex:
    r""":math:`\int_0^\infty w e^{-(c-1)x}L_{\mu,c}(x)/(x(x+w))\,dx`.

    With ``w=None`` the weight ``w/(x+w)`` is replaced by its limit 1, which
    gives the constant :math:`\int_0^\infty x^{-1}e^{-(c-1)x}L_{\mu,c}(x)\,dx`.
    The integral is taken in ``v = log x`` with the piece below a small cutoff
    added from the small-``x`` law.
    """
    mu, c = p.mu, p.c
    if specfun.is_half_integer(mu):
        return 0j
    if w is not None:
        w = _validate_w(w)
    eps = _lower_cutoff(mu, w)
    lo, hi = math.log(eps), math.log(X_MAX)

    if w is None:
        def f(v):
            return L_kernel_scaled(mu, c, np.exp(v))
    else:
        if w.imag == 0:
            w = w.real

        def f(v):
            x = np.exp(v)
            return w * L_kernel_scaled(mu, c, x) / (x + w)

    edges = _mesh(mu, w, lo, hi)
    scale = abs(adaptive_gauss(f, edges, epsrel=1e-6)[0]) + 1e-300
    total, err = adaptive_gauss(f, edges, epsrel=epsrel, epsabs=1e-15 * scale)
    if not err <= 1e-10 * scale:
        raise ConvergenceError(f"cut integral error estimate {err:.2e} exceeds budget")
    total += _small_x_tail(mu, c, eps)
    return complex(total)


def ratio_decomposed(p: HittingProblem, w) -> RatioDecomposition:
    """Evaluate the ratio as leading exponential minus zero sum minus cut integral."""
    w = _validate_w(w)
    mu, c = p.mu, p.c
    damp = np.exp(-(c - 1) * w)
    leading = complex(damp * c ** (-mu))
    zs = zero_sum(p, w)
    it = cut_integral(p, w)
    total = leading - complex(damp) * (zs + it)
    return RatioDecomposition(leading, zs, it, total)


def identity_check(p: HittingProblem, w) -> tuple[complex, complex, float, float]:
    """``(direct, decomposed, abs_err, rel_err)`` for one ``w``."""
    d = ratio_direct(p, w)
    r = ratio_decomposed(p, w).total
    err = abs(r - d)
    return d, r, err, err / abs(d)
