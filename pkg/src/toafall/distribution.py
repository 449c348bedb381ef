"""Arrival-time density of a Gaussian packet, its CDF, and quadrature moments.

Two routes to the same density are kept deliberately distinct:

* ``pdf_general`` evaluates the transformation-rule expression from the
  trajectory functions (works for any Gaussian trajectory);
* ``pdf_freefall`` evaluates the free-fall closed form through the kernel
  backend.

The two agree to near machine precision on free-fall inputs, which is the
module's strongest internal consistency check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import quadrature
from ._backend import kernels
from .core import GaussianTrajectory, PhysicalParams, classical_toa, quantumness
from .errors import NearFieldWarning, NonFiniteEvaluationError, NotConvergedError
from .quadrature import IntegrationConfig, IntegrationResult

#: Detector distances below this many packet widths get the near-field flag.
NEAR_FIELD_WIDTHS = 5.0


@dataclass(frozen=True)
class ToaDensity:
    """A detector position bound to a packet trajectory.

    Emits NearFieldWarning when x < 5 sigma0: there the crossing may happen
    at t <= 0 with non-negligible probability, the density on t > 0
    integrates to less than 1, and moments are conditional quantities.
    """

    trajectory: GaussianTrajectory
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x > 0):
            raise ValueError(f"detector position x must be finite and > 0, got {self.x}")
        if self.is_near_field:
            warnings.warn(
                f"detector at x = {self.x:g} m is within {NEAR_FIELD_WIDTHS:g} "
                f"packet widths (sigma0 = {self.params.sigma0:g} m); "
                "arrival-time statistics are conditional on detection",
                NearFieldWarning,
                stacklevel=2,
            )

    @property
    def params(self) -> PhysicalParams:
        return self.trajectory.params

    @property
    def is_near_field(self) -> bool:
        return self.x < NEAR_FIELD_WIDTHS * self.trajectory.params.sigma0

    def classical_time(self) -> float:
        return classical_toa(self.params, self.x)

    def pdf(self, t):
        """Density at t; uses the compiled closed form when the trajectory
        is the standard free-fall one, the generic expression otherwise."""
        if self.trajectory.kind == "free_fall":
            p = self.params
            out = kernels.pdf_batch(p.mass, p.sigma0, p.v0, p.g, p.hbar, self.x, t)
            return float(out) if np.ndim(t) == 0 else out
        return pdf_general(self, t)


def pdf_general(d: ToaDensity, t):
    """Transformation-rule density |v_c s + (x - x_c) s'| / s^2 * N(x; x_c, s).

    Built from the trajectory evaluators only.  The absolute value keeps the
    result a density for any t, including diagnostic t < 0 evaluation.
    """
    traj = d.trajectory
    t_arr = np.asarray(t, dtype=float)
    s = traj.sigma(t_arr)
    xc = traj.x_c(t_arr)
    arg = (d.x - xc) / s
    with np.errstate(over="ignore", invalid="ignore"):
        ex = 0.5 * arg * arg
        pref = (traj.v_c(t_arr) * s + (d.x - xc) * traj.sigma_dot(t_arr)) / (s * s)
        out = np.abs(pref) * np.exp(-ex) / math.sqrt(2.0 * math.pi)
    out = np.where((ex > 745.0) | ~np.isfinite(ex), 0.0, out)
    if not np.all(np.isfinite(out)):
        raise NonFiniteEvaluationError(f"density is not finite at t={t!r}")
    return float(out) if np.ndim(t) == 0 else out


def pdf_freefall(params: PhysicalParams, x: float, t):
    """Free-fall closed-form density at detector position x.

    Accepts scalar or array t; t < 0 is permitted for normalization
    diagnostics (the prefactor is taken in absolute value, which coincides
    with the plain closed form everywhere the crossing map is monotonic).
    """
    if not (math.isfinite(x) and x > 0):
        raise ValueError(f"detector position x must be finite and > 0, got {x}")
    out = kernels.pdf_batch(params.mass, params.sigma0, params.v0, params.g,
                            params.hbar, x, t)
    if not np.all(np.isfinite(out)):
        raise NonFiniteEvaluationError(f"density is not finite at t={t!r}")
    return float(out) if np.ndim(t) == 0 else out


def branch_start(params: PhysicalParams, x: float) -> float:
    """Start of the monotone branch of the crossing map.

    The density's prefactor vanishes at one time t_b <= 0; on [t_b, +inf)
    the map from the packet quantile to the crossing time is invertible and
    the density integrates to the total crossing probability.  For a dropped
    particle (v0 = 0) t_b = 0 exactly.
    """
    v0, g = params.v0, params.g
    if v0 == 0.0:
        return 0.0
    tau = params.tau()
    if g == 0.0:
        return -v0 * tau * tau / x
    # unique real root of v0 + (x/tau^2 + g) t + (g/2) t^3/tau^2, t < 0
    def pref(t):
        return v0 + x * t / tau**2 + g * t + 0.5 * g * t**3 / tau**2
    lo = -max(v0 * tau * tau / x, v0 / g)
    while pref(lo) > 0:
        lo *= 2.0
    hi = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if pref(mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo


def _config_with_scale(d: ToaDensity, cfg: IntegrationConfig | None) -> IntegrationConfig:
    cfg = cfg or IntegrationConfig()
    if cfg.scale is None:
        cfg = IntegrationConfig(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol,
                                max_evaluations=cfg.max_evaluations,
                                scale=d.classical_time())
    return cfg


def density_breakpoints(d: ToaDensity) -> tuple:
    """Characteristic times seeding the adaptive grids.

    The density is concentrated around t_c with relative width ~ q on the
    early side and a tail stretching to ~ q t_c for large q; these points
    bracket the mass in every regime."""
    t_c = d.classical_time()
    q = quantumness(d.params, d.x)
    pts = {t_c}
    for k in (2.0, 6.0, 20.0, 60.0):
        pts.add(t_c / (1.0 + k * q))
        pts.add(t_c * (1.0 + k * q))
    return tuple(sorted(pts))


def normalization(d: ToaDensity, cfg: IntegrationConfig | None = None, *,
                  full_line: bool = False) -> IntegrationResult:
    """Total probability mass of the density.

    Default bounds are [0, +inf), the observable arrivals.  With
    ``full_line=True`` the lower limit extends to the start of the monotone
    branch of the crossing map, capturing the entire crossing probability;
    in the far field (x >> sigma0) both equal 1 to within ~Phi(-x/sigma0).
    The deficit from 1 is the no-crossing probability and is reported, not
    renormalized away.
    """
    cfg = _config_with_scale(d, cfg)
    lower = branch_start(d.params, d.x) if full_line else 0.0
    return quadrature.integrate_semi_infinite(
        d.pdf, lower, cfg, vectorized=True, breakpoints=density_breakpoints(d))


def moment(d: ToaDensity, n: int, cfg: IntegrationConfig | None = None) -> IntegrationResult:
    """Raw moment of order n >= 1 over [0, +inf), with convergence flag."""
    if n < 1 or int(n) != n:
        raise ValueError(f"moment order must be a positive integer, got {n}")
    cfg = _config_with_scale(d, cfg)

    def integrand(t):
        return t**n * d.pdf(t)

    return quadrature.integrate_semi_infinite(
        integrand, 0.0, cfg, vectorized=True, breakpoints=density_breakpoints(d))


@dataclass(frozen=True)
class ToaMoments:
    """Mean, spread, relative delay, and normalization of the arrival time,
    each with an absolute error estimate from the quadrature."""

    mean: float
    std: float
    delta: float
    normalization: float
    mean_error: float
    std_error: float
    normalization_error: float
    flags: tuple = ()


def compute_moments(d: ToaDensity, cfg: IntegrationConfig | None = None) -> ToaMoments:
    """Mean, standard deviation (from the central second moment), relative
    delay (mean - t_c)/t_c, and normalization.

    Raises NotConvergedError when any constituent integral misses its
    tolerance.  The normalization is reported as-is: values below 1 indicate
    no-crossing mass (near field), never silently divided out.
    """
    cfg = _config_with_scale(d, cfg)
    norm = normalization(d, cfg)
    m1 = moment(d, 1, cfg)
    mean = m1.value

    def centered(t):
        return (t - mean) ** 2 * d.pdf(t)

    var = quadrature.integrate_semi_infinite(
        centered, 0.0, cfg, vectorized=True, breakpoints=density_breakpoints(d))
    for name, res in (("normalization", norm), ("mean", m1), ("variance", var)):
        if not res.converged:
            raise NotConvergedError(f"{name} integral did not converge "
                                    f"(error estimate {res.error_estimate:g})", res)
    t_c = d.classical_time()
    std = math.sqrt(max(var.value, 0.0))
    std_error = var.error_estimate / (2.0 * std) if std > 0 else var.error_estimate
    flags = []
    if d.is_near_field:
        flags.append("near_field")
    if abs(norm.value - 1.0) > 1e-6:
        flags.append("unnormalized")
    return ToaMoments(
        mean=mean,
        std=std,
        delta=(mean - t_c) / t_c,
        normalization=norm.value,
        mean_error=m1.error_estimate,
        std_error=std_error,
        normalization_error=norm.error_estimate,
        flags=tuple(flags),
    )


def cdf(d: ToaDensity, t: float, cfg: IntegrationConfig | None = None) -> float:
    """P(T <= t) for t >= 0, by quadrature, clamped to [0, 1 + 1e-9].

    Raises NotConvergedError if the integral misses its tolerance.
    """
    if t < 0:
        raise ValueError(f"cdf is defined for t >= 0, got {t}")
    if t == 0:
        return 0.0
    cfg = _config_with_scale(d, cfg)
    inner = tuple(p for p in density_breakpoints(d) if 0.0 < p < t)
    res = quadrature.integrate_finite(d.pdf, 0.0, t, cfg, vectorized=True,
                                      breakpoints=inner)
    if not res.converged:
        raise NotConvergedError(
            f"cdf integral did not converge at t={t:g}", res)
    return min(max(res.value, 0.0), 1.0 + 1e-9)


def cdf_grid(d: ToaDensity, ts, cfg: IntegrationConfig | None = None) -> np.ndarray:
    """CDF at many sorted points in one pass (panel-cumulative quadrature).

    Much cheaper than calling ``cdf`` per point; used for goodness-of-fit
    statistics against sampled arrival times.
    """
    cfg = _config_with_scale(d, cfg)
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1 or len(ts) == 0:
        raise ValueError("ts must be a non-empty 1-d array")
    if np.any(np.diff(ts) < 0) or ts[0] < 0:
        raise ValueError("ts must be sorted and nonnegative")
    edges = np.concatenate([[0.0], ts])
    inner = [p for p in density_breakpoints(d) if 0.0 < p < ts[0]]
    head_edges = np.concatenate([[0.0], inner, [ts[0]]]) if inner else edges[:2]
    head_vals, head_errs, _ = quadrature.integrate_panels(
        d.pdf, head_edges, cfg, vectorized=True)
    vals, errs, _ = quadrature.integrate_panels(d.pdf, edges[1:], cfg, vectorized=True)
    cum = np.concatenate([[head_vals.sum()], vals]).cumsum()
    return np.minimum(np.maximum(cum, 0.0), 1.0 + 1e-9)
