"""Arrival-time statistics of free-falling Gaussian wave packets.

Provides the exact arrival-time density of a spreading Gaussian packet under
uniform gravity, adaptive-quadrature moments and CDF, seeded Monte Carlo
crossing samplers, closed-form regime asymptotics, and a CLI that reproduces
the reference tables and sweeps.
"""

from ._backend import active_backend, available_backends, get_backend
from .asymptotics import (AsymptoticMoments, delta_quantum, delta_semiclassical,
                          semiclassical_moments, toa_quantum_regime,
                          toa_semiclassical)
from .core import (HBAR_SI, GaussianTrajectory, PhysicalParams, Regime,
                   RegimeReport, characteristic_time, classical_toa,
                   classify_regime, quantumness)
from .distribution import (ToaDensity, ToaMoments, branch_start, cdf, cdf_grid,
                           compute_moments, moment, normalization, pdf_freefall,
                           pdf_general)
from .errors import (BracketFailureError, DegenerateKinematicsError,
                     InsufficientSamplesError, InvalidForNonzeroV0Error,
                     NearFieldWarning, NonFiniteEvaluationError,
                     NotConvergedError)
from .quadrature import (IntegrationConfig, IntegrationResult, integrate_finite,
                         integrate_semi_infinite)
from .sampling import (SampleBatch, SamplerConfig, SampleStats, draw_xi,
                       estimate_stats, first_crossing, longtof_toa, make_rng,
                       sample_toa, sample_toa_longtof, xi_stream)

__version__ = "0.1.0"

__all__ = [
    "HBAR_SI",
    "AsymptoticMoments",
    "BracketFailureError",
    "DegenerateKinematicsError",
    "GaussianTrajectory",
    "InsufficientSamplesError",
    "IntegrationConfig",
    "IntegrationResult",
    "InvalidForNonzeroV0Error",
    "NearFieldWarning",
    "NonFiniteEvaluationError",
    "NotConvergedError",
    "PhysicalParams",
    "Regime",
    "RegimeReport",
    "SampleBatch",
    "SampleStats",
    "SamplerConfig",
    "ToaDensity",
    "ToaMoments",
    "active_backend",
    "available_backends",
    "branch_start",
    "cdf",
    "cdf_grid",
    "characteristic_time",
    "classical_toa",
    "classify_regime",
    "compute_moments",
    "delta_quantum",
    "delta_semiclassical",
    "draw_xi",
    "estimate_stats",
    "first_crossing",
    "get_backend",
    "integrate_finite",
    "integrate_semi_infinite",
    "longtof_toa",
    "make_rng",
    "moment",
    "normalization",
    "pdf_freefall",
    "pdf_general",
    "quantumness",
    "sample_toa",
    "sample_toa_longtof",
    "semiclassical_moments",
    "toa_quantum_regime",
    "toa_semiclassical",
    "xi_stream",
]
