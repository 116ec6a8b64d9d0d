"""Vectorised adaptive Gauss-Legendre quadrature.

Every refinement sweep evaluates the integrand once on all pending panels,
so integrands built from array special functions stay cheap.  A panel is
accepted when its n-point estimate agrees with the sum over its two halves.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConvergenceError


@lru_cache(maxsize=8)
def _rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_sums(f, a, b, n):
    x, w = _rule(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel())).reshape(nodes.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def adaptive_gauss(f, edges, epsrel=1e-13, epsabs=0.0, n=16, max_panels=20000):
    """Integrate ``f`` over ``[edges[0], edges[-1]]`` with breakpoints at ``edges``.

    Parameters
    ----------
    f : callable
        Maps a 1-d float array to an array of the same length (real or complex).
    edges : sequence of float
        Increasing panel boundaries; the initial mesh.
    epsrel, epsabs : float
        A panel is accepted when ``|G(a,b) - G(a,m) - G(m,b)|`` is at most
        ``epsabs * (b - a) / (hi - lo) + epsrel * |G(a,m) + G(m,b)|``.

    Returns
    -------
    value, error : scalar
        The integral and the summed panel discrepancies.
    """
    edges = np.asarray(edges, dtype=float)
    span = edges[-1] - edges[0]
    a, b = edges[:-1], edges[1:]
    total = 0.0
    err = 0.0
    count = 0
    whole = _panel_sums(f, a, b, n)
    while a.size:
        count += a.size
        if count > max_panels:
            raise ConvergenceError(f"adaptive quadrature exceeded {max_panels} panels")
        m = 0.5 * (a + b)
        left = _panel_sums(f, np.concatenate([a, m]), np.concatenate([m, b]), n)
        k = a.size
        halves = left[:k] + left[k:]
        diff = np.abs(whole - halves)
        ok = diff <= epsabs * (b - a) / span + epsrel * np.abs(halves)
        if not np.all(np.isfinite(halves)):
            raise ConvergenceError("integrand is not finite on the integration range")
        total = total + halves[ok].sum()
        err += diff[ok].sum()
        bad = ~ok
        a = np.concatenate([a[bad], m[bad]])
        b = np.concatenate([m[bad], b[bad]])
        whole = np.concatenate([left[:k][bad], left[k:][bad]])
    return total, err


def gauss_mesh(f, lo, hi, max_width=0.5, epsrel=1e-14, epsabs=0.0, n=16, breakpoints=()):
    """Nodes and weights of a composite rule that integrates ``f`` to tolerance.

    Panels are bisected until each meets the acceptance test of
    :func:`adaptive_gauss`, starting from a mesh no coarser than
    ``max_width`` and containing ``breakpoints``.  The returned rule can then
    be reused for integrands that are ``f`` times a smooth factor.
    """
    inner = sorted(p for p in breakpoints if lo < p < hi)
    edges = [lo]
    for a, b in zip([lo, *inner], [*inner, hi]):
        k = max(1, int(np.ceil((b - a) / max_width)))
        edges.extend(np.linspace(a, b, k + 1)[1:].tolist())
    edges = np.asarray(edges)
    span = hi - lo
    a, b = edges[:-1], edges[1:]
    whole = _panel_sums(f, a, b, n)
    done_a, done_b = [], []
    while a.size:
        if sum(map(len, done_a)) + a.size > 20000:
            raise ConvergenceError("mesh refinement exceeded 20000 panels")
        m = 0.5 * (a + b)
        left = _panel_sums(f, np.concatenate([a, m]), np.concatenate([m, b]), n)
        k = a.size
        halves = left[:k] + left[k:]
        ok = np.abs(whole - halves) <= epsabs * (b - a) / span + epsrel * np.abs(halves)
        done_a.extend([a[ok], m[ok]])
        done_b.extend([m[ok], b[ok]])
        bad = ~ok
        a = np.concatenate([a[bad], m[bad]])
        b = np.concatenate([m[bad], b[bad]])
        whole = np.concatenate([left[:k][bad], left[k:][bad]])
    pa = np.concatenate(done_a)
    pb = np.concatenate(done_b)
    order = np.argsort(pa)
    pa, pb = pa[order], pb[order]
    x, w = _rule(n)
    half = 0.5 * (pb - pa)
    nodes = (0.5 * (pa + pb))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()
