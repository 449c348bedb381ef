"""Seeded Monte Carlo realization of the stochastic arrival time.

Each draw maps a standard-normal packet quantile xi through the crossing
equation x = x_c(t) + xi sigma(t); the smallest positive root is the arrival
time.  Draws with no positive crossing are counted as failures, never
resampled, so the recorded failure rate stays an honest diagnostic.

Determinism contract: the xi stream is produced in fixed-size chunks, each
from its own generator seeded by (seed, chunk index), and deviates come from
the inverse normal CDF of the uniform stream.  Batches are therefore
bit-identical across runs and across worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ._backend import kernels
from .core import PhysicalParams, classical_toa
from .distribution import ToaDensity, cdf_grid
from .errors import (BracketFailureError, DegenerateKinematicsError,
                     InsufficientSamplesError)
from .quadrature import IntegrationConfig

DEFAULT_CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class SamplerConfig:
    """Seed, sample count, and root-finding controls for one batch."""

    seed: int
    n_samples: int
    root_abs_tol: float | None = None      # default: t_c * 1e-12
    max_bracket_expansions: int = 64
    chunk_size: int = DEFAULT_CHUNK_SIZE
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.root_abs_tol is not None and not self.root_abs_tol > 0:
            raise ValueError("root_abs_tol must be > 0")
        if self.max_bracket_expansions < 1:
            raise ValueError("max_bracket_expansions must be >= 1")
        if self.chunk_size < 1 or self.workers < 1:
            raise ValueError("chunk_size and workers must be >= 1")


@dataclass(frozen=True)
class SampleBatch:
    """Successful first-crossing times (draw order) plus failure count."""

    toas: np.ndarray
    failures: int
    seed: int

    @property
    def n_draws(self) -> int:
        return len(self.toas) + self.failures

    @property
    def failure_rate(self) -> float:
        return self.failures / self.n_draws


@dataclass(frozen=True)
class SampleStats:
    mean: float
    std: float
    stderr_mean: float
    ks_statistic: float
    n: int


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic generator for (seed, stream); stream k feeds chunk k."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, stream))))


def draw_xi(rng: np.random.Generator) -> float:
    """One standard-normal deviate via the inverse CDF of the uniform stream."""
    return float(ndtri(rng.random()))


def xi_chunk(seed: int, chunk_index: int, size: int) -> np.ndarray:
    rng = make_rng(seed, chunk_index)
    return ndtri(rng.random(size))


def xi_stream(seed: int, n: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> np.ndarray:
    """The full deviate stream for a batch of n draws."""
    chunks = [xi_chunk(seed, i, min(chunk_size, n - i * chunk_size))
              for i in range((n + chunk_size - 1) // chunk_size)]
    return np.concatenate(chunks)


def first_crossing(params: PhysicalParams, x: float, xi: float, *,
                   root_abs_tol: float | None = None,
                   max_bracket_expansions: int = 64) -> float | None:
    """Smallest t > 0 where the xi-quantile of the packet reaches x.

    Returns None when no positive crossing exists (for example xi >=
    x/sigma0: the quantile starts at or past the detector and moves away).
    Raises BracketFailureError if the expansion budget is exhausted while a
    crossing is analytically guaranteed.
    """
    t_c = classical_toa(params, x)
    abs_tol = root_abs_tol if root_abs_tol is not None else t_c * 1e-12
    roots, status = kernels.crossing_roots(
        params.mass, params.sigma0, params.v0, params.g, params.hbar, x,
        np.array([xi], dtype=float), abs_tol, max_bracket_expansions)
    if status[0] == kernels.STATUS_BRACKET_FAILURE:
        raise BracketFailureError(
            f"no sign change after {max_bracket_expansions} doublings from 2 t_c")
    if status[0] == kernels.STATUS_NO_CROSSING:
        return None
    return float(roots[0])


def _solve_chunks(params: PhysicalParams, x: float, cfg: SamplerConfig):
    """Crossing roots for every chunk, ordered by chunk index."""
    t_c = classical_toa(params, x)
    abs_tol = cfg.root_abs_tol if cfg.root_abs_tol is not None else t_c * 1e-12
    n_chunks = (cfg.n_samples + cfg.chunk_size - 1) // cfg.chunk_size

    def solve(i):
        size = min(cfg.chunk_size, cfg.n_samples - i * cfg.chunk_size)
        xi = xi_chunk(cfg.seed, i, size)
        return kernels.crossing_roots(params.mass, params.sigma0, params.v0,
                                      params.g, params.hbar, x, xi,
                                      abs_tol, cfg.max_bracket_expansions)

    if cfg.workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(solve, range(n_chunks)))
    else:
        results = [solve(i) for i in range(n_chunks)]
    roots = np.concatenate([r for r, _ in results])
    status = np.concatenate([s for _, s in results])
    return roots, status


def sample_toa(params: PhysicalParams, x: float, cfg: SamplerConfig) -> SampleBatch:
    """Monte Carlo batch of first-crossing times (exact root per draw)."""
    roots, status = _solve_chunks(params, x, cfg)
    n_bracket = int(np.count_nonzero(status == kernels.STATUS_BRACKET_FAILURE))
    if n_bracket:
        raise BracketFailureError(
            f"{n_bracket} draws exhausted the bracket expansion budget "
            f"({cfg.max_bracket_expansions} doublings from 2 t_c)")
    ok = status == kernels.STATUS_OK
    return SampleBatch(toas=roots[ok], failures=int(np.count_nonzero(~ok)),
                       seed=cfg.seed)


def longtof_toa(v0: float, g: float, x: float, spread_velocity: float, xi):
    """Long time-of-flight arrival time: fall from rest height 0 with initial
    velocity v0 + spread_velocity * xi.

    ``spread_velocity`` is the packet-growth speed sigma0/tau = hbar/(2 m
    sigma0); passing 0 recovers the classical time for every draw.  Requires
    g > 0 (the quadratic in t degenerates otherwise).
    """
    if g <= 0:
        raise DegenerateKinematicsError("long time-of-flight map requires g > 0")
    c = v0 + spread_velocity * np.asarray(xi, dtype=float)
    root = np.sqrt(c * c + 2.0 * g * x)
    # rationalized on the positive side to avoid sqrt(c^2+2gx) - c cancellation
    out = np.where(c >= 0.0, 2.0 * x / (root + c), (root - c) / g)
    return float(out) if np.ndim(xi) == 0 else out


def sample_toa_longtof(params: PhysicalParams, x: float, cfg: SamplerConfig) -> SampleBatch:
    """Monte Carlo batch through the long time-of-flight closed form.

    Uses the same deviate stream as ``sample_toa`` for the same seed, so the
    two samplers can be compared draw by draw.  Every draw succeeds: for
    g > 0 the closed form always has a positive root.
    """
    if params.g == 0.0:
        raise DegenerateKinematicsError(
            "long time-of-flight sampler requires g > 0; use sample_toa")
    xi = xi_stream(cfg.seed, cfg.n_samples, cfg.chunk_size)
    toas = longtof_toa(params.v0, params.g, x, params.spread_velocity(), xi)
    return SampleBatch(toas=toas, failures=0, seed=cfg.seed)


def ks_statistic(sorted_toas: np.ndarray, model_cdf: np.ndarray) -> float:
    """One-sample Kolmogorov-Smirnov distance between the empirical CDF of
    the (sorted) draws and the model CDF evaluated at those draws."""
    n = len(sorted_toas)
    grid = np.arange(1, n + 1) / n
    d_plus = float(np.max(grid - model_cdf))
    d_minus = float(np.max(model_cdf - (grid - 1.0 / n)))
    return max(d_plus, d_minus)


def estimate_stats(batch: SampleBatch, d: ToaDensity,
                   cfg: IntegrationConfig | None = None) -> SampleStats:
    """Sample mean/std/stderr plus the KS distance to the quadrature CDF."""
    n = len(batch.toas)
    if n < 2:
        raise InsufficientSamplesError(f"need at least 2 arrival times, got {n}")
    mean = float(np.mean(batch.toas))
    std = float(np.std(batch.toas, ddof=1))
    order = np.argsort(batch.toas, kind="stable")
    sorted_toas = batch.toas[order]
    model = cdf_grid(d, sorted_toas, cfg)
    return SampleStats(mean=mean, std=std, stderr_mean=std / math.sqrt(n),
                       ks_statistic=ks_statistic(sorted_toas, model), n=n)
