r"""Laplace-side oracle: the exact transform and its numerical inversion.

The transform of the hitting-time density is

.. math::
    \mathbb E[e^{-\lambda\tau}] = c^{-\nu}\frac{K_\nu(a\sqrt{2\lambda})}{K_\nu(b\sqrt{2\lambda})}.

:func:`invert_laplace` recovers the density from it by the fixed Talbot
contour of Abate and Valko, using nothing but :mod:`besselhit.specfun`; it
shares no code with the pole/cut decomposition in :mod:`besselhit.density`.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .. import specfun
from ..errors import AccuracyWarning, DomainError
from ..hitting_kernels import HittingProblem
from ..quadrature import adaptive_gauss

T_WINDOW = (0.05, 1e4)


def laplace_transform(p: HittingProblem, lam):
    r""":math:`c^{-\nu}K_\nu(a\sqrt{2\lambda})/K_\nu(b\sqrt{2\lambda})` for ``|arg lam| < pi``.

    Vectorised over ``lam``; the ratio is formed from log-scaled values.
    """
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise DomainError("the transform is evaluated at lam != 0; its limit at 0 is min(1, c^(-2 nu))")
    s = np.sqrt(2 * lam)
    log_ratio = specfun.log_bessel_k(p.nu, p.a * s) - specfun.log_bessel_k(p.nu, p.b * s)
    out = p.c ** (-p.nu) * np.exp(log_ratio)
    if np.all(lam.imag == 0) and np.all(lam.real > 0):
        out = out.real
    return out[()] if out.ndim == 0 else out


def talbot_nodes(t: float, M: int):
    """Contour points ``lam_k`` and weights ``gamma_k`` so that ``f(t) ~ sum Re(gamma_k F(lam_k))``."""
    r = 2.0 * M / (5.0 * t)
    theta = np.arange(1, M) * math.pi / M
    cot = 1.0 / np.tan(theta)
    lam = np.empty(M, dtype=complex)
    gam = np.empty(M, dtype=complex)
    lam[0] = r
    gam[0] = 0.5 * math.exp(r * t)
    lam[1:] = r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1) * cot
    gam[1:] = np.exp(t * lam[1:]) * (1 + 1j * sigma)
    return lam, gam * (r / M)


def invert_laplace(p: HittingProblem, t, M: int = 24, transform=None):
    """Density at ``t`` by fixed-Talbot inversion of the transform.

    Parameters
    ----------
    p : HittingProblem
    t : float or array
        Times; the validated window is ``[0.05, 1e4]`` and an
        :class:`AccuracyWarning` is issued outside it.
    M : int
        Number of contour nodes.  Truncation error falls like ``10**(-0.6 M)``
        while round-off grows like ``exp(0.4 M)`` times machine epsilon; 24
        balances the two in double precision.
    transform : callable, optional
        Replaces :func:`laplace_transform` (used to test the inverter itself).
    """
    F = (lambda lam: laplace_transform(p, lam)) if transform is None else transform
    tt = np.asarray(t, dtype=float)
    if np.any(~(tt > 0)):
        raise DomainError("invert_laplace needs t > 0")
    if np.any(tt < T_WINDOW[0]) or np.any(tt > T_WINDOW[1]):
        warnings.warn(
            f"Laplace inversion outside the validated window {T_WINDOW}", AccuracyWarning, stacklevel=2
        )
    out = np.empty(tt.shape)
    for idx, tv in np.ndenumerate(tt):
        lam, gam = talbot_nodes(float(tv), M)
        out[idx] = float(np.sum((gam * F(lam)).real))
    return out[()] if out.ndim == 0 else out


def forward_transform(f, lam: float, t_lo: float, t_hi: float, epsrel: float = 1e-12) -> float:
    r""":math:`\int_{t_{lo}}^{t_{hi}} e^{-\lambda t} f(t)\,dt` by adaptive quadrature in ``log t``.

    ``f`` must accept an array of times.
    """
    lo, hi = math.log(t_lo), math.log(t_hi)
    edges = np.linspace(lo, hi, max(2, int(math.ceil(2 * (hi - lo)))) + 1)

    def g(s):
        t = np.exp(s)
        return np.exp(-lam * t) * f(t) * t

    val, _ = adaptive_gauss(g, edges, epsrel=epsrel, epsabs=1e-16)
    return float(val)


def laplace_check(p: HittingProblem, t, analytic) -> dict[str, np.ndarray]:
    """Columns ``t, analytic, inverted, rel_err`` for a density routine ``analytic(p, t)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    exact = np.atleast_1d(analytic(p, t))
    inv = np.atleast_1d(invert_laplace(p, t))
    return {"t": t, "analytic": exact, "inverted": inv, "rel_err": np.abs(inv - exact) / np.abs(exact)}
