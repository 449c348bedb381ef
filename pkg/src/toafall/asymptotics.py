"""Closed-form arrival-time formulas in the two limiting regimes.

All expressions are long time-of-flight results (t_c >> tau).  The
semiclassical expansion is quadratic in the packet quantile xi; the quantum
regime keeps the exact quadratic-formula rewrite and exposes its |xi| - xi
simplification separately, because the quoted quantum delay derives from
that simplification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams, Regime, classical_toa, quantumness
from .errors import DegenerateKinematicsError, InvalidForNonzeroV0Error


@dataclass(frozen=True)
class AsymptoticMoments:
    mean: float
    std: float
    delta: float
    regime: Regime


def _speed_sq(params: PhysicalParams, x: float) -> float:
    s = params.v0**2 + 2.0 * params.g * x
    if s == 0.0:
        raise DegenerateKinematicsError("v0^2 + 2 g x = 0")
    return s


def toa_semiclassical(params: PhysicalParams, x: float, xi) -> float:
    """Arrival time of the xi-quantile, expanded to second order in the
    spread-to-speed ratio (accurate for q << 1 and t_c >> tau)."""
    s = _speed_sq(params, x)
    t_c = classical_toa(params, x)
    sig_over_tau = params.spread_velocity()
    xi_arr = np.asarray(xi, dtype=float)
    lin = -(t_c / math.sqrt(s)) * sig_over_tau * xi_arr
    quad = x * sig_over_tau**2 * xi_arr * xi_arr / s**1.5
    out = t_c + lin + quad
    return float(out) if np.ndim(xi) == 0 else out


def semiclassical_moments(params: PhysicalParams, x: float) -> AsymptoticMoments:
    """Mean and standard deviation implied by the semiclassical expansion.

    mean = t_c + x (sigma0/tau)^2 / (v0^2 + 2gx)^(3/2)
    std  = t_c (sigma0/tau) / sqrt(v0^2 + 2gx)

    The variance keeps only the leading order; the quantile-squared term's
    own fluctuation enters at relative order q^2 and is dropped.
    """
    s = _speed_sq(params, x)
    t_c = classical_toa(params, x)
    sig_over_tau = params.spread_velocity()
    mean = t_c + x * sig_over_tau**2 / s**1.5
    std = t_c * sig_over_tau / math.sqrt(s)
    return AsymptoticMoments(mean=mean, std=std, delta=(mean - t_c) / t_c,
                             regime=Regime.SEMI_CLASSICAL)


def _require_dropped(params: PhysicalParams):
    if params.v0 != 0.0:
        raise InvalidForNonzeroV0Error(
            "this closed form is stated for a dropped particle (v0 = 0)")


def delta_semiclassical(params: PhysicalParams, x: float) -> float:
    """Relative quantum delay q^2 / 2 of a dropped particle, q << 1."""
    _require_dropped(params)
    q = quantumness(params, x)
    return 0.5 * q * q


def delta_quantum(params: PhysicalParams, x: float) -> float:
    """Relative quantum delay sqrt(2/pi) q of a dropped particle, q >> 1.

    sqrt(2/pi) is the mean of |xi| for a standard normal quantile.
    """
    _require_dropped(params)
    return math.sqrt(2.0 / math.pi) * quantumness(params, x)


def toa_quantum_regime(params: PhysicalParams, x: float, xi, *,
                       approximate: bool = False):
    """Arrival time of the xi-quantile for a dropped particle, written as
    q t_c (sqrt(xi^2 + 1/q^2) - xi).

    This is an exact rewrite of the long time-of-flight crossing time; with
    ``approximate=True`` it collapses to q t_c (|xi| - xi), the q >> 1 form
    behind the quantum-regime delay estimate.
    """
    _require_dropped(params)
    q = quantumness(params, x)
    t_c = classical_toa(params, x)
    xi_arr = np.asarray(xi, dtype=float)
    if approximate:
        out = q * t_c * (np.abs(xi_arr) - xi_arr)
    else:
        # sqrt(xi^2 + 1/q^2) - xi cancels badly for xi >> 1/q; rationalize
        # on the positive side.
        root = np.sqrt(xi_arr * xi_arr + 1.0 / (q * q))
        diff = np.where(xi_arr >= 0.0, (1.0 / (q * q)) / (root + xi_arr),
                        root - xi_arr)
        out = q * t_c * diff
    return float(out) if np.ndim(xi) == 0 else out
