r"""Density of the first hitting time of ``b`` from ``a > b`` and its large-time laws.

With :math:`c=a/b`, :math:`\mu=|\nu|`, :math:`m=a-b` and the Brownian kernel
:math:`q(t)` the density is

.. math::
    f(t) = c^{-\nu-\mu}q - c^{-\nu}\Phi^1 - c^{-\nu}\Phi^2 - c^{-\nu}\Psi^1 + c^{-\nu}\Psi^2,

where the zero terms :math:`\Phi` are present when :math:`K_\mu` has zeros and
the cut terms :math:`\Psi` when :math:`\mu` is not a half integer:

* :math:`\Phi^1 = \sum_j E_j/z_j \cdot q`,
* :math:`\Phi^2 = b^{-1}(2\pi t^3)^{-1/2}\sum_j E_j\,T(t, m, z_j/b)\,e^{-(c-1)z_j}`,
* :math:`\Psi^1 = \int_0^\infty x^{-1}e^{-(c-1)x}L_{\mu,c}(x)\,dx \cdot q`,
* :math:`\Psi^2 = b^{-1}(2\pi t^3)^{-1/2}\int_0^\infty L_{\mu,c}(x)\,T(t, m, -x/b)\,dx`,

with :math:`T` the tilted Gaussian tail and :math:`E_j` the zero weights of
:mod:`besselhit.ratio_theorem`.  Each problem gets a one-off precomputation (zeros,
the two constants and a quadrature rule in :math:`\log x` that resolves
:math:`L_{\mu,c}`), after which evaluation on a time grid is vectorised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as sc

from . import specfun
from .errors import DomainError, UnsupportedOrderError
from .hitting_kernels import Case, HittingProblem, L_kernel_scaled, q_kernel, tilted_tail_shifted
from .quadrature import adaptive_gauss, gauss_mesh
from .ratio_theorem import cut_integral, zero_weights

# Cut integrals in v = log x run over [log X_MIN, log X_MAX].
X_MIN = 1e-30
X_MAX = 40.0
X_FLOOR = 1e-8
_T_CHUNK = 128


@dataclass(frozen=True)
class _Precomputed:
    zeros: np.ndarray          # upper-half-plane and real zeros only
    weights: np.ndarray        # E_j, with conjugate pairs folded in via `mult`
    mult: np.ndarray           # 2 for a zero standing for a conjugate pair, 1 for a real zero
    phi_const: float           # sum_j E_j / z_j
    psi_const: float           # int x^-1 e^{-(c-1)x} L dx
    nodes: np.ndarray          # x at the cut-integral nodes
    lw: np.ndarray             # L e^{-(c-1)x} * x * weight at the nodes


@lru_cache(maxsize=128)
def precompute(p: HittingProblem) -> _Precomputed:
    """Per-problem constants and the cut-integral rule (computed once, then shared)."""
    mu, c = p.mu, p.c
    empty = np.zeros(0)
    zeros, weights, mult = empty.astype(complex), empty.astype(complex), empty
    phi_const = 0.0
    if p.case in (Case.HALF_GENERAL, Case.GENERAL):
        zset, ew = zero_weights(mu, c)
        keep = [k for k, z in enumerate(zset.zeros) if z.imag >= 0]
        zeros = np.array([zset.zeros[k] for k in keep], dtype=complex)
        weights = np.array([ew[k] for k in keep], dtype=complex)
        mult = np.where(zeros.imag > 0, 2.0, 1.0)
        phi_const = float(np.sum(mult * (weights / zeros).real))
    nodes, lw = empty, empty
    psi_const = 0.0
    if p.case in (Case.SMALL, Case.GENERAL):
        psi_const = cut_integral(p, None).real
        # Branch switches of the L evaluation and the zero abscissae.
        bps = [0.0, math.log(0.5), math.log(25 / c)] + [math.log(-z.real) for z in zeros]

        # The large-t weight behaves like b/x down to x ~ b/sqrt(t); resolving
        # L * x / (x + X_FLOOR) covers t up to (b / X_FLOOR)^2.
        def f(v):
            x = np.exp(v)
            return L_kernel_scaled(mu, c, x) * x / (x + X_FLOOR)

        lo, hi = math.log(X_MIN), math.log(X_MAX)
        v, w = gauss_mesh(f, lo, hi, breakpoints=bps, epsrel=1e-14, epsabs=1e-16 * abs(psi_const))
        nodes = np.exp(v)
        lw = L_kernel_scaled(mu, c, nodes) * nodes * w
    return _Precomputed(zeros, weights, mult, phi_const, psi_const, nodes, lw)


def _times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("density needs t > 0")
    return t


def _shape(out, t):
    return out[()] if np.ndim(t) == 0 else out


def _phi2(p: HittingProblem, pre: _Precomputed, t: np.ndarray) -> np.ndarray:
    if pre.zeros.size == 0:
        return np.zeros_like(t)
    tt = t.ravel()[:, None]
    tails = tilted_tail_shifted(tt, p.gap, (pre.zeros / p.b)[None, :])
    s = np.sum(pre.mult * (pre.weights * tails).real, axis=1)
    return (s / (p.b * math.sqrt(2 * math.pi) * tt[:, 0] ** 1.5)).reshape(t.shape)


def _psi2(p: HittingProblem, pre: _Precomputed, t: np.ndarray) -> np.ndarray:
    if pre.nodes.size == 0:
        return np.zeros_like(t)
    flat = t.ravel()
    out = np.empty_like(flat)
    beta = -pre.nodes / p.b
    for s in range(0, flat.size, _T_CHUNK):
        tt = flat[s:s + _T_CHUNK, None]
        tails = tilted_tail_shifted(tt, p.gap, beta[None, :])
        out[s:s + _T_CHUNK] = tails @ pre.lw
    return (out / (p.b * math.sqrt(2 * math.pi) * flat**1.5)).reshape(t.shape)


def psi2_adaptive(p: HittingProblem, t: float, epsrel: float = 1e-12) -> float:
    """Reference evaluation of the cut term at one time by adaptive quadrature.

    Independent of the precomputed rule; used to validate it.
    """
    if p.case in (Case.HALF, Case.HALF_GENERAL):
        return 0.0
    mu, c, m, b = p.mu, p.c, p.gap, p.b

    def f(v):
        x = np.exp(v)
        return L_kernel_scaled(mu, c, x) * x * tilted_tail_shifted(t, m, -x / b)

    lo, hi = math.log(X_MIN), math.log(X_MAX)
    edges = np.unique(np.r_[np.linspace(lo, hi, 60), 0.0, math.log(0.5), math.log(25 / c)])
    peak = np.max(np.abs(f(np.linspace(lo, hi, 4001))))
    val, _ = adaptive_gauss(f, edges, epsrel=epsrel, epsabs=1e-17 * peak * (hi - lo))
    return val / (b * math.sqrt(2 * math.pi) * t**1.5)


def phi_terms(p: HittingProblem, t):
    """The zero terms ``(Phi1, Phi2)`` at ``t``; both zero when ``K_nu`` has no zeros."""
    t = _times(t)
    pre = precompute(p)
    phi1 = pre.phi_const * q_kernel(t, p)
    return _shape(phi1, t), _shape(_phi2(p, pre, t), t)


def psi_terms(p: HittingProblem, t):
    """The cut terms ``(Psi1, Psi2)`` at ``t``; both zero for half-integer orders."""
    t = _times(t)
    pre = precompute(p)
    psi1 = pre.psi_const * q_kernel(t, p)
    return _shape(psi1, t), _shape(_psi2(p, pre, t), t)


@dataclass(frozen=True)
class DensityTerms:
    """Unweighted pieces of the density and the signed prefactors that combine them.

    ``f = sum(prefactors[k] * term_k)`` over ``(q_term, phi1, phi2, psi1, psi2)``.
    """

    q_term: np.ndarray | float
    phi1: np.ndarray | float
    phi2: np.ndarray | float
    psi1: np.ndarray | float
    psi2: np.ndarray | float
    prefactors: tuple[float, float, float, float, float]
    f: np.ndarray | float

    @property
    def rounding_floor(self):
        """Absolute rounding level of ``f``: ``64 eps sum_k |prefactor_k term_k|``.

        At large times for ``|nu| > 3/2`` the terms nearly cancel and values of
        ``f`` below this level are noise.
        """
        parts = (self.q_term, self.phi1, self.phi2, self.psi1, self.psi2)
        return 64 * np.finfo(float).eps * sum(abs(k) * np.abs(v) for k, v in zip(self.prefactors, parts))

    def as_rows(self):
        """Rows ``(t-independent order) f, q, phi1, phi2, psi1, psi2`` as float arrays."""
        return [np.atleast_1d(v) for v in (self.f, self.q_term, self.phi1, self.phi2, self.psi1, self.psi2)]


def prefactors(p: HittingProblem) -> tuple[float, float, float, float, float]:
    """Signed coefficients of ``(q, Phi1, Phi2, Psi1, Psi2)``; inapplicable terms get 0."""
    cn = p.c ** (-p.nu)
    lead = p.c ** (-p.nu - p.mu)
    has_phi = p.case in (Case.HALF_GENERAL, Case.GENERAL)
    has_psi = p.case in (Case.SMALL, Case.GENERAL)
    return (
        lead,
        -cn if has_phi else 0.0,
        -cn if has_phi else 0.0,
        -cn if has_psi else 0.0,
        cn if has_psi else 0.0,
    )


def density_terms(p: HittingProblem, t) -> DensityTerms:
    t = _times(t)
    pre = precompute(p)
    q = q_kernel(t, p)
    zero = np.zeros_like(q)
    phi1 = pre.phi_const * q if pre.zeros.size else zero
    psi1 = pre.psi_const * q if pre.nodes.size else zero
    phi2 = _phi2(p, pre, t)
    psi2 = _psi2(p, pre, t)
    pf = prefactors(p)
    if p.case is Case.HALF:
        f = pf[0] * q
    else:
        f = pf[0] * q + pf[1] * phi1 + pf[2] * phi2 + pf[3] * psi1 + pf[4] * psi2
    return DensityTerms(*(_shape(v, t) for v in (q, phi1, phi2, psi1, psi2)), pf, _shape(f, t))


def density(p: HittingProblem, t):
    """Hitting-time density ``f(t)``; ``t`` may be a scalar or an array of positive times."""
    return density_terms(p, t).f


# ---------------------------------------------------------------------------
# Large-time behaviour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticLaw:
    r"""``constant * t**exponent * (log t)**log_power * (1 + alpha1/log t)``.

    ``correction_alpha1`` is ``None`` when no logarithmic correction is known.
    """

    exponent: float
    log_power: float
    constant: float
    correction_alpha1: float | None = None

    def __call__(self, t, corrected: bool = False):
        t = np.asarray(t, dtype=float)
        lt = np.log(t)
        out = self.constant * t**self.exponent * lt**self.log_power
        if corrected and self.correction_alpha1 is not None:
            out = out * (1 + self.correction_alpha1 / lt)
        return out[()] if out.ndim == 0 else out


def alpha1(b: float) -> float:
    r"""First logarithmic correction :math:`2(\gamma - \log 2 + 2\log b)` for order 0."""
    return 2 * (specfun.EULER_GAMMA - math.log(2) + 2 * math.log(b))


def power_law_constant(p: HittingProblem) -> float:
    r""":math:`b^{2\mu}(c^\mu - c^{-\mu}) / (c^\nu 2^\mu\Gamma(\mu))`, the ``t^{-1-\mu}`` coefficient."""
    mu, c, nu, b = p.mu, p.c, p.nu, p.b
    return b ** (2 * mu) * (c**mu - c**-mu) / (c**nu * 2**mu * specfun.gamma(mu))


def asymptotic_law(p: HittingProblem) -> AsymptoticLaw:
    """Leading large-``t`` law of the density.

    Available for ``nu = 0``, ``0 < |nu| < 1/2`` and ``|nu| = 1/2``.  Other
    orders raise :class:`UnsupportedOrderError`: no closed-form constant is
    available for them.
    """
    mu, c = p.mu, p.c
    if mu == 0:
        return AsymptoticLaw(-1.0, -2.0, 2 * math.log(c), alpha1(p.b))
    if mu < 0.5:
        return AsymptoticLaw(-1.0 - mu, 0.0, power_law_constant(p))
    if mu == 0.5:
        return AsymptoticLaw(-1.5, 0.0, c ** (-p.nu - mu) * p.gap / math.sqrt(2 * math.pi))
    raise UnsupportedOrderError(
        f"no closed-form large-time constant for |nu| = {mu} > 1/2; "
        "supported orders are nu = 0, 0 < |nu| < 1/2 and |nu| = 1/2"
    )


def asymptotic_density(p: HittingProblem, t, corrected: bool = False):
    """Large-time approximation of the density.

    For ``nu = 0`` ``corrected=True`` includes the ``1 + alpha1/log t`` factor.
    For ``|nu| = 1/2`` the density itself is returned, since it is elementary.
    Requires ``t > e``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(~(t > math.e)):
        raise DomainError("asymptotic_density needs t > e")
    law = asymptotic_law(p)
    if p.mu == 0.5:
        out = c_half(p) * q_kernel(t, p)
        return out[()] if np.ndim(out) == 0 else out
    return law(t, corrected=corrected)


def c_half(p: HittingProblem) -> float:
    return p.c ** (-p.nu - p.mu)


# ---------------------------------------------------------------------------
# Total mass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MassBreakdown:
    """``total = truncated + tail``; ``horizon`` is where the numerical part stops."""

    truncated: float
    tail: float
    horizon: float
    total: float
    target: float
    tail_rule: str = field(default="")


def mass_target(p: HittingProblem) -> float:
    """``P(tau < infinity) = min(1, c^{-2 nu})``."""
    return min(1.0, p.c ** (-2 * p.nu))


def _horizon(p: HittingProblem) -> float:
    if p.mu == 0.5:
        return 1e6
    if p.mu == 0:
        return 1e14
    if p.mu < 0.5:
        return 1e10
    return 1e6


def mass_breakdown(p: HittingProblem, horizon: float | None = None, epsrel: float = 1e-11) -> MassBreakdown:
    r"""Integral of the density on ``(0, T]`` plus an analytic tail beyond ``T``.

    Tail rules:

    * ``|nu| = 1/2``: exact, :math:`c^{-\nu-\mu}\operatorname{erf}(m/\sqrt{2T})`;
    * ``nu = 0``: the corrected law integrates to
      :math:`2\log c\,[1/\log T + \alpha_1/(2\log^2 T)]`;
    * ``0 < |nu| < 1/2``: :math:`C T^{-\mu}/\mu` with the closed-form constant;
    * ``|nu| > 1/2``: the density decays like :math:`t^{-1-\mu}`; the
      coefficient is read off the computed density at ``T``.
    """
    T = _horizon(p) if horizon is None else float(horizon)
    m = p.gap
    lo = math.log(m * m / 1500.0)
    hi = math.log(T)
    edges = np.linspace(lo, hi, int(math.ceil(hi - lo)) + 1)

    def g(s):
        t = np.exp(s)
        return density(p, t) * t

    truncated, _ = adaptive_gauss(g, edges, epsrel=epsrel, epsabs=1e-14)
    mu = p.mu
    if mu == 0.5:
        tail = c_half(p) * float(sc.erf(m / math.sqrt(2 * T)))
        rule = "exact"
    elif mu == 0:
        lt = math.log(T)
        tail = 2 * math.log(p.c) * (1 / lt + alpha1(p.b) / (2 * lt * lt))
        rule = "log-law with first correction"
    elif mu < 0.5:
        tail = power_law_constant(p) * T**-mu / mu
        rule = "power law, closed-form constant"
    else:
        fitted = float(density(p, T)) * T ** (1 + mu)
        tail = fitted * T**-mu / mu
        rule = "power law, constant matched at the horizon"
    return MassBreakdown(float(truncated), float(tail), T, float(truncated + tail), mass_target(p), rule)


def total_mass(p: HittingProblem) -> float:
    """``int_0^inf f(t) dt`` (numerical part plus analytic tail)."""
    return mass_breakdown(p).total


def asymptotic_table(p: HittingProblem, t, corrected: bool = False) -> dict[str, np.ndarray]:
    """Columns ``t, f_exact, f_asymptotic, ratio`` comparing the density with its large-time law."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    fa = np.atleast_1d(asymptotic_density(p, t, corrected=corrected))
    fe = np.atleast_1d(density(p, t))
    return {"t": t, "f_exact": fe, "f_asymptotic": fa, "ratio": fe / fa}
