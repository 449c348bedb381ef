"""Physical parameters, classical kinematics, and Gaussian packet trajectories.

Everything downstream (densities, quadrature moments, samplers, asymptotics)
consumes the two value types defined here.  All types are immutable and all
functions are pure, so they are safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateKinematicsError

#: CODATA reduced Planck constant, J s.  Overridable per parameter set so
#: that tests can work in natural units.
HBAR_SI = 1.054571817e-34

#: Regime thresholds on the quantumness factor q.  Decade margins around the
#: crossover; used only for labeling, never inside a computation.
Q_SEMICLASSICAL_MAX = 0.1
Q_QUANTUM_MIN = 10.0


class Regime(enum.Enum):
    SEMI_CLASSICAL = "semi_classical"
    TRANSITION = "transition"
    QUANTUM = "quantum"


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Experiment configuration: particle, initial packet, and gravity.

    mass    -- particle mass, kg (> 0)
    sigma0  -- initial packet width, m (> 0)
    v0      -- mean initial velocity, m/s (>= 0; negative values make the
               crossing map non-monotonic and are rejected)
    g       -- gravitational acceleration, m/s^2 (>= 0)
    hbar    -- reduced Planck constant, J s (> 0, overridable)
    x0      -- mean initial position, fixed at 0; shift the detector instead
    """

    mass: float
    sigma0: float
    v0: float = 0.0
    g: float = 9.81
    hbar: float = HBAR_SI
    x0: float = 0.0

    def __post_init__(self):
        for name in ("mass", "sigma0", "v0", "g", "hbar", "x0"):
            _require_finite(name, getattr(self, name))
        if self.mass <= 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if self.sigma0 <= 0:
            raise ValueError(f"sigma0 must be > 0, got {self.sigma0}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.v0 < 0:
            raise ValueError(
                "v0 < 0 is unsupported: the packet-quantile crossing map is "
                "no longer monotonic for downward launches"
            )
        if self.x0 != 0.0:
            raise ValueError("x0 is fixed at 0; move the detector position x instead")
        tau = self.tau()
        if not (math.isfinite(tau) and tau > 0):
            raise ValueError(f"characteristic spreading time is not finite: {tau}")

    def tau(self) -> float:
        """Characteristic spreading time 2 m sigma0^2 / hbar."""
        return 2.0 * self.mass * self.sigma0**2 / self.hbar

    def spread_velocity(self) -> float:
        """Asymptotic packet-growth speed sigma0/tau = hbar/(2 m sigma0)."""
        return self.hbar / (2.0 * self.mass * self.sigma0)


def characteristic_time(params: PhysicalParams) -> float:
    """Spreading timescale of the packet; t >> tau is the long time of flight."""
    return params.tau()


def classical_toa(params: PhysicalParams, x: float) -> float:
    """Newtonian arrival time at detector position x > 0.

    Evaluated as 2x / (sqrt(v0^2 + 2 g x) + v0), which is exact for g > 0,
    reduces smoothly to x/v0 for g = 0, and avoids the cancellation of the
    quadratic-formula form at small g.
    """
    _require_finite("x", x)
    if x <= 0:
        raise ValueError(f"detector position x must be > 0, got {x}")
    if params.g == 0.0 and params.v0 == 0.0:
        raise DegenerateKinematicsError(
            "g = 0 and v0 = 0: the particle never reaches the detector"
        )
    return 2.0 * x / (math.sqrt(params.v0**2 + 2.0 * params.g * x) + params.v0)


def quantumness(params: PhysicalParams, x: float) -> float:
    """Ratio q of the height-dependent wavelength scale to the packet width.

    q = hbar / (2 m sigma0 sqrt(v0^2 + 2 g x)).  q << 1 is the semiclassical
    regime, q >> 1 the quantum regime.
    """
    _require_finite("x", x)
    if x <= 0:
        raise ValueError(f"detector position x must be > 0, got {x}")
    s = params.v0**2 + 2.0 * params.g * x
    if s == 0.0:
        raise DegenerateKinematicsError("v0^2 + 2 g x = 0: quantumness undefined")
    return params.hbar / (2.0 * params.mass * params.sigma0 * math.sqrt(s))


@dataclass(frozen=True)
class RegimeReport:
    """Quantumness, classical time, regime label, and both closed-form delay
    estimates (quoted for the dropped-particle case v0 = 0)."""

    q: float
    t_c: float
    regime: Regime
    delta_semiclassical: float
    delta_quantum: float


def classify_regime(params: PhysicalParams, x: float) -> RegimeReport:
    """Label the (params, x) configuration and report both closed-form delay
    estimates.  The label is diagnostic only."""
    q = quantumness(params, x)
    t_c = classical_toa(params, x)
    if q < Q_SEMICLASSICAL_MAX:
        regime = Regime.SEMI_CLASSICAL
    elif q > Q_QUANTUM_MIN:
        regime = Regime.QUANTUM
    else:
        regime = Regime.TRANSITION
    return RegimeReport(
        q=q,
        t_c=t_c,
        regime=regime,
        delta_semiclassical=0.5 * q * q,
        delta_quantum=math.sqrt(2.0 / math.pi) * q,
    )


@dataclass(frozen=True)
class GaussianTrajectory:
    """The four time functions x_c(t), v_c(t), sigma(t), sigma_dot(t) that
    define a Gaussian packet's evolution.

    Evaluators must accept floats or numpy arrays.  ``kind`` identifies
    trajectories with a known closed-form density so that hot paths can use
    the compiled kernel; custom trajectories use the generic evaluators.
    """

    params: PhysicalParams
    x_c: Callable
    v_c: Callable
    sigma: Callable
    sigma_dot: Callable
    kind: str = "custom"

    @classmethod
    def free_fall(cls, params: PhysicalParams) -> "GaussianTrajectory":
        """Uniform-gravity trajectory: x_c = v0 t + g t^2 / 2 and the
        standard spreading law sigma(t) = sigma0 sqrt(1 + t^2/tau^2)."""
        v0, g, sigma0 = params.v0, params.g, params.sigma0
        tau = params.tau()

        def x_c(t):
            return v0 * t + 0.5 * g * t * t

        def v_c(t):
            return v0 + g * t

        def sigma(t):
            return sigma0 * np.sqrt(1.0 + (t / tau) ** 2)

        def sigma_dot(t):
            return sigma0 * (t / tau**2) / np.sqrt(1.0 + (t / tau) ** 2)

        return cls(params=params, x_c=x_c, v_c=v_c, sigma=sigma,
                   sigma_dot=sigma_dot, kind="free_fall")

    @classmethod
    def free_motion(cls, params: PhysicalParams) -> "GaussianTrajectory":
        """Free-particle trajectory, the g = 0 special case."""
        if params.g != 0.0:
            raise ValueError("free_motion requires params.g == 0")
        return cls.free_fall(params)
