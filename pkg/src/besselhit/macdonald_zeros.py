r"""Zeros of the Macdonald function :math:`K_\nu` in the cut plane.

Half-integer orders have the zeros of the reverse Bessel polynomial
:math:`\theta_n`.  Other orders are tracked by Newton continuation in the order,
starting from the half-integer order with the same zero count.  Every set is
certified by an argument-principle count before it is returned.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

from . import specfun
from .errors import CertificationError, ConvergenceError, DomainError, EvaluationError

MAX_ORDER = 10.0


def zero_count(nu: float) -> int:
    r"""Number of zeros of :math:`K_\nu` in :math:`|\arg z| < \pi`.

    ``|nu| - 1/2`` for half-integer orders, otherwise the even integer
    closest to ``|nu| - 1/2`` (never negative).
    """
    mu = abs(float(nu))
    if not math.isfinite(mu):
        raise DomainError("order must be finite")
    r = mu - 0.5
    if specfun.is_half_integer(mu):
        return int(round(r))
    return max(0, 2 * math.floor(r / 2 + 0.5))


@dataclass(frozen=True)
class Certificate:
    ok: bool
    count: int
    expected: int
    max_residual: float
    attempts: int = 1
    message: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class MacdonaldZeroSet:
    """Zeros of ``K_nu`` with their conjugate pairing.

    ``pairs`` holds index pairs ``(i, j)`` with ``zeros[j] == conj(zeros[i])``
    and ``Im zeros[i] > 0``; ``real`` holds the index of the real zero if any.
    """

    nu: float
    zeros: tuple[complex, ...]
    pairs: tuple[tuple[int, int], ...] = ()
    real: tuple[int, ...] = ()
    certificate: Certificate | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def as_array(self) -> np.ndarray:
        return np.array(self.zeros, dtype=complex)

    def without(self, index: int) -> "MacdonaldZeroSet":
        """A copy with one zero dropped; pairing is rebuilt from the survivors."""
        zs = [z for k, z in enumerate(self.zeros) if k != index]
        return _assemble(self.nu, zs, certificate=None)


def _assemble(nu, zeros, certificate=None) -> MacdonaldZeroSet:
    upper = sorted((z for z in zeros if z.imag > 0), key=lambda z: (z.real, z.imag))
    reals = sorted(z for z in zeros if z.imag == 0)
    lower = [z for z in zeros if z.imag < 0]
    out: list[complex] = []
    pairs = []
    for z in upper:
        i = len(out)
        out.extend([z, z.conjugate()])
        pairs.append((i, i + 1))
    matched = {z.conjugate() for z in upper}
    stray = [z for z in lower if z not in matched]
    real_idx = []
    for z in reals:
        real_idx.append(len(out))
        out.append(complex(z.real, 0.0))
    out.extend(stray)
    return MacdonaldZeroSet(float(nu), tuple(out), tuple(pairs), tuple(real_idx), certificate)


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------

def _residual(mu: float, z: complex) -> float:
    """Distance-like residual ``|K_mu(z) / K_mu'(z)|`` (one Newton step)."""
    if specfun.is_half_integer(mu):
        n = int(round(mu - 0.5))
        coef = specfun.reverse_bessel_coefficients(n)
        return abs(np.polyval(coef, z) / np.polyval(np.polyder(coef), z))
    k = sc.kve(mu, z)
    dk = -0.5 * (sc.kve(mu - 1, z) + sc.kve(mu + 1, z))
    return abs(k / dk)


# ---------------------------------------------------------------------------
# Zero finding
# ---------------------------------------------------------------------------

def _half_integer_zeros(mu: float) -> list[complex]:
    n = int(round(mu - 0.5))
    if n == 0:
        return []
    # Closed forms: theta_1 = z + 1, theta_2 = z^2 + 3z + 3.
    if n == 1:
        return [complex(-1.0, 0.0)]
    if n == 2:
        z = complex(-1.5, math.sqrt(3) / 2)
        return [z, z.conjugate()]
    coef = specfun.reverse_bessel_coefficients(n)
    dcoef = np.polyder(coef)
    roots = np.roots(coef)
    polished = []
    for z in roots:
        z = complex(z)
        for _ in range(8):
            step = np.polyval(coef, z) / np.polyval(dcoef, z)
            z -= step
            if abs(step) < 1e-16 * abs(z):
                break
        polished.append(z)
    upper = [z for z in polished if z.imag > 1e-9]
    reals = [complex(z.real, 0.0) for z in polished if abs(z.imag) <= 1e-9]
    return upper + [z.conjugate() for z in upper] + reals


def _newton(mu: float, z: complex, found: list[complex], maxiter: int = 60) -> complex:
    """Deflated Newton on ``K_mu`` restricted to the open upper half plane."""
    for _ in range(maxiter):
        k = sc.kve(mu, z)
        if k == 0:
            return z  # landed on the zero exactly
        dk = -0.5 * (sc.kve(mu - 1, z) + sc.kve(mu + 1, z))
        logd = dk / k
        for r in found:
            logd -= 1.0 / (z - r)
        step = 1.0 / logd
        if not np.isfinite(step):
            raise ConvergenceError(f"Newton step not finite at z={z}")
        znew = z - step
        while znew.imag <= 0:
            step *= 0.5
            znew = z - step
            if abs(step) < 1e-300:
                raise ConvergenceError("Newton iterate pinned to the cut")
        z = znew
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            return z
    raise ConvergenceError(f"Newton did not converge for K_{mu} near {z}")


def _continued_zeros(mu: float, n_zeros: int) -> list[complex]:
    """Upper-half-plane zeros for non-half-integer ``mu`` by continuation."""
    start = n_zeros + 0.5
    seeds = [z for z in _half_integer_zeros(start) if z.imag > 0]
    nu_cur = start
    h = math.copysign(0.05, mu - start)
    while nu_cur != mu:
        nxt = nu_cur + h
        if (h > 0 and nxt > mu) or (h < 0 and nxt < mu):
            nxt = mu
        try:
            new = []
            for z in seeds:
                znew = _newton(nxt, z, new)
                if abs(znew - z) > 0.25 + 4 * abs(nxt - nu_cur):
                    raise ConvergenceError("zero jumped during continuation")
                new.append(znew)
        except ConvergenceError:
            if abs(h) < 1e-6:
                raise
            h *= 0.5
            continue
        seeds, nu_cur = new, nxt
    return seeds


@functools.lru_cache(maxsize=128)
def _find_zeros_cached(mu: float) -> MacdonaldZeroSet:
    n = zero_count(mu)
    if n == 0:
        zs: list[complex] = []
    elif specfun.is_half_integer(mu):
        zs = _half_integer_zeros(mu)
    else:
        upper = _continued_zeros(mu, n)
        zs = upper + [z.conjugate() for z in upper]
    zset = _assemble(mu, zs)
    cert = certify_zeros(zset)
    if not cert.ok:
        raise CertificationError(cert.message)
    return MacdonaldZeroSet(zset.nu, zset.zeros, zset.pairs, zset.real, cert)


def find_zeros(nu: float) -> MacdonaldZeroSet:
    r"""All zeros of :math:`K_\nu` in the cut plane, certified.

    Raises
    ------
    DomainError
        If ``|nu| > 10``.
    ConvergenceError, CertificationError
        If the zeros cannot be located or the count does not check out.
    """
    mu = abs(float(nu))
    if mu > MAX_ORDER:
        raise DomainError(f"zero finder validated for |nu| <= {MAX_ORDER}")
    zset = _find_zeros_cached(specfun._k_order(mu))
    if float(nu) != zset.nu:
        return MacdonaldZeroSet(float(nu), zset.zeros, zset.pairs, zset.real, zset.certificate)
    return zset


# ---------------------------------------------------------------------------
# Argument principle
# ---------------------------------------------------------------------------

class _ContourHit(Exception):
    pass


def _phase_function(mu: float):
    """``z -> arg f(z)`` for a function with the zeros of ``K_mu`` in the cut plane.

    ``z`` may carry a ``+0j`` marker on the negative real axis through the
    ``on_cut`` flag, meaning the boundary value from above.
    """
    if specfun.is_half_integer(mu):
        coef = specfun.reverse_bessel_coefficients(int(round(mu - 0.5)))

        def phase(z, on_cut=False):
            v = np.polyval(coef, z)
            return np.angle(v), abs(v)

        return phase

    def phase(z, on_cut=False):
        if on_cut:
            x = -z.real
            v = np.exp(-1j * math.pi * mu) * sc.kve(mu, x) * math.exp(-x) - 1j * math.pi * sc.ive(mu, x) * math.exp(x)
            return np.angle(v), abs(v)
        v = sc.kve(mu, z)
        # arg K = arg(e^z K) - Im z
        return np.angle(v) - z.imag, abs(v) * math.exp(-z.real)

    return phase


def _edge_winding(phase, z0: complex, z1: complex, on_cut: bool, rate: float, n0: int = 64) -> float:
    """Total change of argument along the segment ``z0 -> z1``.

    Segments are bisected until the wrapped increment is below pi/4 and the
    step is short compared with ``|z| / rate`` (the phase of ``z**-rate``
    turns fast near the origin) and with 1/4 (the ``e^{-z}`` factor).
    """
    total = 0.0
    pts = [z0 + (z1 - z0) * k / n0 for k in range(n0 + 1)]
    vals = [phase(z, on_cut) for z in pts]
    stack = list(zip(zip(pts[:-1], vals[:-1]), zip(pts[1:], vals[1:])))[::-1]
    while stack:
        (za, (pa, ma)), (zb, (pb, mb)) = stack.pop()
        d = (pb - pa + math.pi) % (2 * math.pi) - math.pi
        h = abs(zb - za)
        short = h <= 0.25 and h * rate <= 0.2 * min(abs(za), abs(zb))
        if abs(d) < math.pi / 4 and short:
            total += d
            continue
        if h < 1e-12 * max(1.0, abs(za)):
            raise _ContourHit(f"argument jumps by {d:.3g} over a vanishing segment near {za}")
        zm = 0.5 * (za + zb)
        pm = phase(zm, on_cut)
        if short and pm[1] < 1e-6 * min(ma, mb):
            raise _ContourHit(f"function nearly vanishes on the contour at {zm}")
        stack.append(((zm, pm), (zb, (pb, mb))))
        stack.append(((za, (pa, ma)), (zm, pm)))
    return total


def _winding_count(mu: float, R: float, delta: float) -> int:
    phase = _phase_function(mu)
    if specfun.is_half_integer(mu):
        corners = [complex(-delta, -R), complex(-delta, R), complex(-R, R), complex(-R, -R)]
        edges = [(corners[k], corners[(k + 1) % 4], False) for k in range(4)]
        factor = 1
    else:
        # upper half of the rectangle; the bottom edge runs along the top of the cut
        edges = [
            (complex(-delta, 0.0), complex(-delta, R), False),
            (complex(-delta, R), complex(-R, R), False),
            (complex(-R, R), complex(-R, 0.0), False),
            (complex(-R, 0.0), complex(-delta, 0.0), True),
        ]
        factor = 2  # conjugate symmetry, no zeros on the cut
    total = sum(_edge_winding(phase, z0, z1, cut, mu + 1.0) for z0, z1, cut in edges)
    turns = total / (2 * math.pi)
    if abs(turns - round(turns)) > 0.05:
        raise _ContourHit(f"non-integer winding {turns:.4f}")
    return factor * int(round(turns))


def certify_zeros(zset: MacdonaldZeroSet, residual_tol: float = 1e-10) -> Certificate:
    """Argument-principle count over ``Re z in [-R, -delta], |Im z| <= R``.

    ``R = 2(|nu| + 2)`` and ``delta = 1e-3``.  The contour is perturbed and
    retried (up to five times) if it passes too close to a zero.
    """
    mu = abs(zset.nu)
    expected = len(zset.zeros)
    R, delta = 2 * (mu + 2), 1e-3
    count, err = None, ""
    attempt = 0
    for attempt in range(1, 6):
        try:
            count = _winding_count(mu, R, delta)
            break
        except _ContourHit as exc:
            err = str(exc)
            R *= 1.0 + 0.0137 * attempt
            delta *= 1.0 + 0.31 * attempt
    if count is None:
        raise EvaluationError(f"argument-principle contour kept hitting a zero: {err}")
    residuals = [_residual(mu, z) for z in zset.zeros]
    max_res = max(residuals, default=0.0)
    conj_ok = all(
        any(abs(z.conjugate() - w) <= 1e-12 * max(1.0, abs(z)) for w in zset.zeros) for z in zset.zeros
    )
    rule = zero_count(mu)
    problems = []
    if count != expected:
        problems.append(f"contour count {count} != stored {expected}")
    if count != rule:
        problems.append(f"contour count {count} != count rule {rule}")
    if max_res > residual_tol:
        problems.append(f"residual {max_res:.3g} > {residual_tol:g}")
    if any(z.real >= 0 for z in zset.zeros):
        problems.append("zero with non-negative real part")
    if not conj_ok:
        problems.append("set not closed under conjugation")
    return Certificate(not problems, count, expected, max_res, attempt, "; ".join(problems))
