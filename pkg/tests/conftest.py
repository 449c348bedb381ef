import numpy as np
import pytest

from toafall import GaussianTrajectory, PhysicalParams, ToaDensity

# Reference drop scenarios: hydrogen-1 atom, 0.1 um initial width.
HYDROGEN_MASS = 1.6735575e-27
SIGMA0 = 1e-7


def hydrogen_params(g=9.81, sigma0=SIGMA0, v0=0.0):
    return PhysicalParams(mass=HYDROGEN_MASS, sigma0=sigma0, v0=v0, g=g)


@pytest.fixture(scope="session")
def row1():
    return hydrogen_params(g=9.81), 0.1


@pytest.fixture(scope="session")
def row2():
    return hydrogen_params(g=9.81), 0.01


@pytest.fixture(scope="session")
def row3():
    return hydrogen_params(g=1e-5), 0.1


@pytest.fixture(scope="session")
def row1_density(row1):
    params, x = row1
    return ToaDensity(trajectory=GaussianTrajectory.free_fall(params), x=x)


def random_far_field(rng, *, allow_g0=False, q_range=(1e-2, 1e3)):
    """One random parameter set in natural-ish units with x >= 10 sigma0.

    Rejection-samples until the quantumness lands inside ``q_range`` so that
    downstream quadrature stays well conditioned.  With ``allow_g0`` a third
    of the draws are free particles (v0 > 0, g = 0); note that for those the
    total crossing probability is below 1 by Phi(-v0 tau / sigma0), however
    far the detector is.
    """
    from toafall import quantumness

    while True:
        mass = 10.0 ** rng.uniform(-0.3, 0.3)
        sigma0 = 10.0 ** rng.uniform(-0.3, 0.3)
        hbar = 10.0 ** rng.uniform(-1.0, 1.0)
        x = sigma0 * 10.0 ** rng.uniform(1.0, 2.5)
        mode = rng.integers(0, 3)
        if mode == 0:
            v0, g = 0.0, 10.0 ** rng.uniform(-1.0, 1.0)
        elif mode == 1:
            v0 = 10.0 ** rng.uniform(-1.0, 1.0)
            g = 10.0 ** rng.uniform(-1.0, 1.0)
        else:
            v0 = 10.0 ** rng.uniform(-1.0, 1.0)
            g = 0.0 if allow_g0 else 10.0 ** rng.uniform(-1.0, 1.0)
        params = PhysicalParams(mass=mass, sigma0=sigma0, v0=v0, g=g, hbar=hbar)
        q = quantumness(params, x)
        if q_range[0] <= q <= q_range[1]:
            return params, x


def free_fall_density(params, x):
    return ToaDensity(trajectory=GaussianTrajectory.free_fall(params), x=x)
