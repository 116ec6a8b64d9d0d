r"""Scalar building blocks of the hitting-time density.

* :class:`HittingProblem` -- the triple ``(a, b, nu)`` with ``a > b > 0``.
* :func:`q_kernel` -- the Brownian first-passage density
  :math:`q(t) = (a-b)(2\pi t^3)^{-1/2} e^{-(a-b)^2/2t}`.
* :func:`L_kernel` -- the branch-cut kernel

  .. math::
      L_{\mu,c}(x) = \frac{\cos(\pi\mu)\{I_\mu(cx)K_\mu(x) - I_\mu(x)K_\mu(cx)\}}
                          {K_\mu(x)^2 + \pi^2 I_\mu(x)^2 + 2\pi\sin(\pi\mu)K_\mu(x)I_\mu(x)}.

  The denominator is :math:`|K_\mu(xe^{i\pi})|^2`, so it never vanishes
  unless :math:`\cos\pi\mu = 0`, where the kernel is identically zero.
* :func:`tilted_tail` -- :math:`\int_m^\infty \xi e^{-\xi^2/2t + \beta\xi}\,d\xi`
  in closed form through ``erfcx``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from . import specfun
from .errors import DomainError, EvaluationError

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2 * math.pi)


class Case(str, enum.Enum):
    """The four shapes the density formula takes, by order."""

    HALF = "half-integer-1/2"            # nu = +-1/2
    SMALL = "small-order"                # |nu| < 3/2, nu != +-1/2
    HALF_GENERAL = "half-integer-general"  # nu - 1/2 integer, |nu| >= 3/2
    GENERAL = "general-large"            # |nu| > 3/2 otherwise


def classify(nu: float) -> Case:
    mu = abs(nu)
    if mu == 0.5:
        return Case.HALF
    if specfun.is_half_integer(mu):
        return Case.HALF_GENERAL
    if mu < 1.5:
        return Case.SMALL
    return Case.GENERAL


@dataclass(frozen=True)
class HittingProblem:
    """First hitting time of level ``b`` for a Bessel process of index ``nu`` started at ``a``.

    Only the case ``a > b > 0`` is supported.
    """

    a: float
    b: float
    nu: float

    def __post_init__(self):
        for name in ("a", "b", "nu"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not self.b > 0:
            raise DomainError("target level b must be positive")
        if not self.a > self.b:
            raise DomainError(
                f"start a={self.a} must exceed target b={self.b}: only hitting from above (a > b) is supported"
            )

    @property
    def c(self) -> float:
        return self.a / self.b

    @property
    def mu(self) -> float:
        return abs(self.nu)

    @property
    def gap(self) -> float:
        """``a - b``, the distance to the target."""
        return self.a - self.b

    @property
    def case(self) -> Case:
        return classify(self.nu)


# ---------------------------------------------------------------------------
# q kernel
# ---------------------------------------------------------------------------

def q_kernel(t, p: HittingProblem):
    """Inverse-Gaussian first-passage density of Brownian motion from ``a`` to ``b``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("q_kernel needs t > 0")
    m = p.gap
    with np.errstate(under="ignore"):
        out = m / (math.sqrt(2 * math.pi) * t**1.5) * np.exp(-m * m / (2 * t))
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# L kernel
# ---------------------------------------------------------------------------

def L_smallx_constant(mu: float, c: float) -> float:
    r""":math:`\lim_{x\downarrow 0} L_{\mu,c}(x)/x^{2\mu}` for :math:`\mu > 0`."""
    if not mu > 0:
        raise DomainError("the small-x law is logarithmic at mu = 0; use L0_asymptote")
    if specfun.is_half_integer(mu):
        return 0.0
    return (
        math.cos(math.pi * mu)
        * (c**mu - c**-mu)
        / (2 ** (2 * mu - 1) * specfun.gamma(mu) * specfun.gamma(mu + 1))
    )


def L0_asymptote(c: float, log_x):
    r"""Small-x form of :math:`L_{0,c}` written through :math:`\log x`.

    :math:`\log c / ((\log(x/2) + \gamma)^2 + \pi^2)`, which equals
    :math:`\log c/(\log x)^2\,(1 + o(1))` and is exact up to relative
    :math:`O(x^2\log x)`.
    """
    ell = np.asarray(log_x) - math.log(2) + specfun.EULER_GAMMA
    return math.log(c) / (ell * ell + math.pi**2)


def _series_terms(z2, shift, nterms=90):
    r""":math:`\sum_k (z^2/4)^k / (k!\,\Gamma(k+1+shift))`, vectorised over ``z2 = z^2/4``."""
    term = np.full_like(z2, sc.rgamma(1 + shift))
    total = term.copy()
    for k in range(1, nterms):
        term = term * z2 / (k * (k + shift))
        total += term
    return total


def _L_series_nonint(mu, c, x):
    """Small-x kernel for non-integer ``mu`` via :math:`I_{\\pm\\mu}` series (no cancellation)."""
    s, cs2, sn2 = math.sin(math.pi * mu), math.cos(2 * math.pi * mu), math.sin(2 * math.pi * mu)
    x2, cx2 = x * x / 4, (c * x) ** 2 / 4
    a_x, a_cx = _series_terms(x2, -mu), _series_terms(cx2, -mu)
    b_x, b_cx = _series_terms(x2, mu), _series_terms(cx2, mu)
    y = np.exp(2 * mu * np.log(x / 2))
    num = c**mu * b_cx * a_x - c**-mu * b_x * a_cx
    den = (a_x - y * b_x * cs2) ** 2 + (sn2 * y * b_x) ** 2
    return math.cos(math.pi * mu) * (2 * s / math.pi) * y * num / den


def _L_series_zero(c, x):
    """Small-x kernel for ``mu = 0`` using the logarithmic series of ``K_0``."""
    def i0_s(z):
        z2 = z * z / 4
        term = np.ones_like(z)
        i0, s = term.copy(), -specfun.EULER_GAMMA * term
        harm = 0.0
        for k in range(1, 90):
            term = term * z2 / (k * k)
            harm += 1.0 / k
            i0 += term
            s += term * (harm - specfun.EULER_GAMMA)
        return i0, s

    i0x, sx = i0_s(x)
    i0c, sc_ = i0_s(c * x)
    num = i0x * i0c * math.log(c) + i0c * sx - i0x * sc_
    k0 = -np.log(x / 2) * i0x + sx
    return num / (k0 * k0 + (math.pi * i0x) ** 2)


def _L_direct_scaled(mu, c, x):
    """``L(x) e^{-(c-1)x}`` from log-scaled ``I`` and ``K``."""
    lix, lkx = specfun.log_bessel_i(mu, x), specfun.log_bessel_k(mu, x)
    lic, lkc = specfun.log_bessel_i(mu, c * x), specfun.log_bessel_k(mu, c * x)
    s = math.sin(math.pi * mu)
    d1, d2 = 2 * lkx, 2 * lix + 2 * LOG_PI
    ref = np.maximum(d1, d2)
    shift = ref + (c - 1) * x
    with np.errstate(under="ignore"):
        num = np.exp(lic + lkx - shift) - np.exp(lix + lkc - shift)
        den = np.exp(d1 - ref) + np.exp(d2 - ref)
        if s != 0:
            den = den + math.copysign(1.0, s) * np.exp(lix + lkx + LOG_2PI + math.log(abs(s)) - ref)
    if np.any(den <= 1e-300):
        raise EvaluationError("L kernel denominator underflow")
    return math.cos(math.pi * mu) * num / den


def L_kernel_scaled(mu: float, c: float, x):
    r""":math:`L_{\mu,c}(x)\,e^{-(c-1)x}`, which decays like :math:`e^{-2x}`.

    This is the form every integral of the density actually needs; it stays
    finite where :math:`L_{\mu,c}` itself overflows (``c > 3``, large ``x``).
    """
    mu = abs(float(mu))
    if not c > 1:
        raise DomainError("L kernel needs c > 1")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("L kernel needs x >= 0")
    out = np.zeros_like(x)
    if specfun.is_half_integer(mu):
        return out[()] if out.ndim == 0 else out
    pos = x > 0
    if mu == 0:
        small = pos & (x < 0.5) & (c * x <= 25)
        tiny = small & (x < 1e-150)
        if np.any(tiny):
            out[tiny] = L0_asymptote(c, np.log(x[tiny]))
        series = small & ~tiny
        if np.any(series):
            xs = x[series]
            out[series] = _L_series_zero(c, xs) * np.exp(-(c - 1) * xs)
    elif specfun.is_integer(mu):
        small = pos & (x < 1e-8)
        if np.any(small):
            xs = x[small]
            out[small] = L_smallx_constant(mu, c) * xs ** (2 * mu) * np.exp(-(c - 1) * xs)
    else:
        small = pos & (x <= 1) & (c * x <= 25)
        if np.any(small):
            xs = x[small]
            out[small] = _L_series_nonint(mu, c, xs) * np.exp(-(c - 1) * xs)
    rest = pos & ~small
    if np.any(rest):
        out[rest] = _L_direct_scaled(mu, c, x[rest])
    return out[()] if out.ndim == 0 else out


def L_kernel(mu: float, c: float, x):
    r"""The branch-cut kernel :math:`L_{\mu,c}(x)` for ``mu >= 0``, ``c > 1``, ``x > 0``.

    Identically zero when ``mu - 1/2`` is an integer.  For ``c > 3`` the
    kernel grows like :math:`e^{(c-3)x}`; use :func:`L_kernel_scaled` inside
    integrals.
    """
    if mu < 0:
        raise DomainError("L kernel is defined for mu >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("L kernel needs x > 0")
    with np.errstate(over="ignore"):
        out = L_kernel_scaled(mu, c, x) * np.exp((c - 1) * x)
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Tilted Gaussian tail
# ---------------------------------------------------------------------------

def _tail_bracket(t, m, beta):
    r"""``t + beta t sqrt(pi t/2) erfcx(z)``, ``z = (m - beta t)/sqrt(2t)``.

    For ``|z| >= 8`` with ``Re z >= 0`` the cancelling sum is rewritten as
    ``t (m - beta t w)/(m - beta t)`` with ``w = 1 - sqrt(pi) z erfcx(z)``
    summed from its asymptotic series.
    """
    t = np.asarray(t, dtype=float)
    beta = np.asarray(beta)
    t, beta = np.broadcast_arrays(t, beta)
    z = (m - beta * t) / np.sqrt(2 * t)
    far = (np.abs(z) >= 8) & (z.real >= 0)
    out = np.empty(np.broadcast(t, beta).shape, dtype=np.result_type(beta, float))
    near = ~far
    if np.any(near):
        tn, bn = t[near], beta[near]
        out[near] = tn + bn * tn * np.sqrt(np.pi * tn / 2) * sc.erfcx(z[near])
    if np.any(far):
        tf, bf, zf = t[far], beta[far], z[far]
        inv = 1.0 / (2 * zf * zf)
        term = inv.copy()
        w = term.copy()
        for n in range(1, 40):
            term = -term * (2 * n + 1) * inv
            w = w + term
        out[far] = tf * (m - bf * tf * w) / (m - bf * tf)
    if not np.all(np.isfinite(out)):
        raise OverflowError("tilted tail overflow")
    return out


def tilted_tail(t, m: float, beta):
    r""":math:`\int_m^\infty \xi\,e^{-\xi^2/(2t) + \beta\xi}\,d\xi`.

    Closed form :math:`e^{-m^2/2t + \beta m}\,[t + \beta t\sqrt{\pi t/2}\,
    \mathrm{erfcx}((m-\beta t)/\sqrt{2t})]`.  ``beta`` may be complex; the
    formula needs ``Re beta <= 0`` or moderate ``|beta| sqrt(t)``.
    """
    if np.any(np.asarray(t) <= 0):
        raise DomainError("tilted_tail needs t > 0")
    br = _tail_bracket(t, m, beta)
    with np.errstate(under="ignore"):
        out = np.exp(-m * m / (2 * np.asarray(t, dtype=float)) + np.asarray(beta) * m) * br
    return out[()] if np.ndim(out) == 0 else out


def tilted_tail_shifted(t, m: float, beta):
    r""":math:`e^{-\beta m}` times :func:`tilted_tail`; finite for any ``Re beta <= 0``."""
    br = _tail_bracket(t, m, beta)
    with np.errstate(under="ignore"):
        out = np.exp(-m * m / (2 * np.asarray(t, dtype=float))) * br
    return out[()] if np.ndim(out) == 0 else out
