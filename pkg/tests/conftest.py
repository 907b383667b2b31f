import numpy as np
import pytest

from mobiusflat.spiral import (
    IntegratorControls,
    SpiralParams,
    SpiralState,
    integrate_spiral,
    reconstruct_curve,
)
from mobiusflat.zoo import (
    cone_immersion,
    cylinder_immersion,
    rotational_immersion,
    torus_immersion,
)

N_DIM = 4


def make_trajectory(epsilon, big_r, kappa0, kappa_s0, s_max, variant="standard"):
    params = SpiralParams(N_DIM, epsilon, big_r, variant=variant)
    traj = integrate_spiral(
        params, SpiralState(0.0, kappa0, kappa_s0), IntegratorControls(s_max=s_max, step=1e-3)
    )
    return reconstruct_curve(traj)


@pytest.fixture(scope="session")
def cylinder_traj():
    # flat model, linearly varying curvature (R = 0 spiral)
    return make_trajectory(0, 0.0, 1.2, 0.08, 5.0)


@pytest.fixture(scope="session")
def cone_traj():
    # unstable family: keep the arc short so kappa stays tame
    return make_trajectory(1, -1.0, 1.02, 0.0, 2.0)


@pytest.fixture(scope="session")
def rotational_traj():
    # kappa oscillates in [1.05, 1.26]: the profile curve stays circle-like
    # and y remains in a moderate band, keeping differencing well conditioned
    return make_trajectory(-1, 0.75, 1.25, 0.05, 4.5)


@pytest.fixture(scope="session")
def cylinder(cylinder_traj):
    return cylinder_immersion(cylinder_traj, N_DIM)


@pytest.fixture(scope="session")
def cone(cone_traj):
    return cone_immersion(cone_traj, N_DIM)


@pytest.fixture(scope="session")
def rotational(rotational_traj):
    return rotational_immersion(rotational_traj, N_DIM)


@pytest.fixture(scope="session")
def torus():
    return torus_immersion(0.5, N_DIM)


def interior_points(imm, count, seed=0, pad=0.1):
    """Jittered points spread along the first coordinate, inside the domain.

    pad keeps nested difference stencils (outer curvature step plus inner
    immersion step) away from the chart boundary.
    """
    rng = np.random.default_rng(seed)
    lo0, hi0 = imm.domain[0]
    pts = np.tile(imm.base_point, (count, 1))
    pts[:, 0] = np.linspace(lo0 + pad, hi0 - pad, count)
    for a in range(1, imm.chart_dimension):
        lo, hi = imm.domain[a]
        width = min(hi - lo, 1.0)
        pts[:, a] += rng.uniform(-0.1, 0.1, size=count) * width
        pts[:, a] = np.clip(pts[:, a], lo + pad, hi - pad)
    return pts
