r"""Monte Carlo oracle: first passage of the radial SDE below a level.

The Bessel process of index :math:`\nu` solves

.. math:: dX = \frac{2\nu+1}{2X}\,dt + dW,

simulated by Euler-Maruyama with the step shortened to
:math:`\min(\Delta t, \kappa (X-b)^2)` near the barrier and a Brownian-bridge
test :math:`\exp(-2(X_k-b)(X_{k+1}-b)/\delta t)` for crossings between grid
points.  Paths are simulated in fixed-size chunks, each seeded from its own
:class:`numpy.random.SeedSequence` child, so results do not depend on how many
threads run the chunks.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numba
import numpy as np

from ..density import density
from ..errors import DomainError
from ..hitting_kernels import HittingProblem
from ..quadrature import _rule

CHUNK = 4096
THREADS_ENV = "BESSELHIT_THREADS"

# Prefer OpenMP; the TBB layer shipped with some numba wheels is too old to load.
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "omp"


@dataclass(frozen=True)
class McConfig:
    """Simulation settings.

    Attributes
    ----------
    paths : int
        Number of simulated paths.
    step : float
        Base time step ``Delta t``.
    seed : int
        Root seed; chunk ``k`` uses the ``k``-th spawned child.
    t_max : float
        Horizon; paths still running then are survivors.
    bins : tuple of float
        Increasing histogram edges for hitting times.
    kappa : float or None
        Barrier refinement factor; ``None`` keeps the step fixed at ``step``.
    bridge : bool
        Apply the Brownian-bridge crossing test.
    floor : float
        Distance to the barrier treated as a hit.
    cap_factor : float
        Paths above ``cap_factor * a`` stop and count as survivors.
    """

    paths: int = 100_000
    step: float = 1e-2
    seed: int = 12345
    t_max: float = 20.0
    bins: tuple[float, ...] = tuple(np.linspace(0.05, 20.0, 31))
    kappa: float | None = 0.1
    bridge: bool = True
    floor: float = 1e-10
    cap_factor: float = 50.0

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError("paths must be at least 1")
        if not self.step > 0 or not self.t_max > 0:
            raise DomainError("step and t_max must be positive")
        edges = np.asarray(self.bins, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DomainError("bins must be strictly increasing with at least two edges")
        if self.kappa is not None and not self.kappa > 0:
            raise DomainError("kappa must be positive or None")


@dataclass(frozen=True)
class McResult:
    """Binned hitting times.

    ``hits + survivors == paths``; ``hit_count`` covers only hits inside the
    bin range, the remainder being ``hits - hit_count.sum()``.
    """

    edges: np.ndarray
    hit_count: np.ndarray
    hits: int
    survivors: int
    paths: int
    density: np.ndarray = field(repr=False)
    se: np.ndarray = field(repr=False)

    @property
    def absorbed_fraction(self) -> float:
        return self.hits / self.paths

    @property
    def survivor_fraction(self) -> float:
        return self.survivors / self.paths


@numba.njit(cache=True)
def _simulate_chunk(seed, n, a, b, nu, step, t_max, kappa, use_kappa, bridge, floor, cap):
    np.random.seed(seed)
    out = np.full(n, np.nan)
    drift_c = (2.0 * nu + 1.0) / 2.0
    for i in range(n):
        x = a
        t = 0.0
        while t < t_max:
            d = x - b
            dt = step
            if use_kappa:
                dt = min(dt, kappa * d * d)
            dt = min(dt, t_max - t)
            xn = x + drift_c / x * dt + math.sqrt(dt) * np.random.standard_normal()
            dn = xn - b
            t += dt
            if dn <= floor:
                out[i] = t
                break
            if bridge:
                u = np.random.random()
                if u < math.exp(-2.0 * d * dn / dt):
                    out[i] = t
                    break
            if xn > cap:
                break
            x = xn
    return out


@numba.njit(parallel=True, cache=True)
def _simulate_all(seeds, sizes, a, b, nu, step, t_max, kappa, use_kappa, bridge, floor, cap):
    offsets = np.zeros(sizes.size + 1, dtype=np.int64)
    for k in range(sizes.size):
        offsets[k + 1] = offsets[k] + sizes[k]
    out = np.empty(offsets[-1])
    for k in numba.prange(sizes.size):
        out[offsets[k]:offsets[k + 1]] = _simulate_chunk(
            seeds[k], sizes[k], a, b, nu, step, t_max, kappa, use_kappa, bridge, floor, cap
        )
    return out


def set_threads(n: int | None = None) -> int:
    """Set the simulator thread count (default: ``$BESSELHIT_THREADS`` or all cores)."""
    if n is None:
        env = os.environ.get(THREADS_ENV)
        n = int(env) if env else numba.config.NUMBA_NUM_THREADS
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def hitting_times(p: HittingProblem, cfg: McConfig) -> np.ndarray:
    """Simulated hitting times, ``nan`` for paths that survive to ``t_max`` or leave the cap."""
    nchunks = -(-cfg.paths // CHUNK)
    sizes = np.full(nchunks, CHUNK, dtype=np.int64)
    sizes[-1] = cfg.paths - CHUNK * (nchunks - 1)
    children = np.random.SeedSequence(cfg.seed).spawn(nchunks)
    seeds = np.array([int(c.generate_state(1, dtype=np.uint32)[0]) for c in children], dtype=np.int64)
    return _simulate_all(
        seeds, sizes, float(p.a), float(p.b), float(p.nu), float(cfg.step), float(cfg.t_max),
        float(cfg.kappa or 0.0), cfg.kappa is not None, cfg.bridge, float(cfg.floor),
        float(cfg.cap_factor * p.a),
    )


def simulate_hitting(p: HittingProblem, cfg: McConfig) -> McResult:
    """Histogram of simulated hitting times with binomial standard errors."""
    times = hitting_times(p, cfg)
    edges = np.asarray(cfg.bins, dtype=float)
    hit = ~np.isnan(times)
    counts, _ = np.histogram(times[hit], bins=edges)
    hits = int(hit.sum())
    frac = counts / cfg.paths
    width = np.diff(edges)
    dens = frac / width
    se = np.sqrt(frac * (1 - frac) / cfg.paths) / width
    return McResult(edges, counts, hits, cfg.paths - hits, cfg.paths, dens, se)


def bin_average_density(p: HittingProblem, edges, n: int = 16) -> np.ndarray:
    """Exact density averaged over each bin (Gauss-Legendre on each bin)."""
    edges = np.asarray(edges, dtype=float)
    x, w = _rule(n)
    lo, hi = edges[:-1], edges[1:]
    nodes = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * x[None, :]
    vals = density(p, nodes.ravel()).reshape(nodes.shape)
    return 0.5 * (vals * w[None, :]).sum(axis=1)


def z_scores(result: McResult, analytic: np.ndarray) -> np.ndarray:
    """Per-bin ``(mc - analytic)/se``; bins with no hits use the analytic standard error."""
    width = np.diff(result.edges)
    p_exact = analytic * width
    se_exact = np.sqrt(np.clip(p_exact * (1 - p_exact), 0, None) / result.paths) / width
    se = np.where(result.se > 0, result.se, se_exact)
    return (result.density - analytic) / se
