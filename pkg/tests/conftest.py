import numpy as np
import pytest

import epirecon as ep

# benchmark settings shared across the suite
CASE1_THETA = np.array([0.3, 0.25, 0.1, 0.05])   # sirs
CASE2_THETA = np.array([0.3, 0.25, 0.1])          # sir
X0 = np.array([0.9, 0.1])
H = 2.0 ** -5
TMAX = 5.0
SIGMA1 = np.array([-0.0075, 0.125, 0.05, 0.25 / 0.3])
SIGMA2 = np.array([0.25 * 0.1 / 0.3, 0.25 / 0.3])
COMBOS2 = (0.1, 0.25 / 0.3, 0.225)


@pytest.fixture(scope="session")
def grid():
    return ep.GridSpec(h=H, t_max=TMAX)


@pytest.fixture(scope="session")
def case1(grid):
    model = ep.get_model("sirs")
    traj = ep.integrate(model, CASE1_THETA, X0, grid)
    chain = ep.analytic_chain(model, traj, CASE1_THETA, 5)
    return model, traj, chain


@pytest.fixture(scope="session")
def case2(grid):
    model = ep.get_model("sir")
    traj = ep.integrate(model, CASE2_THETA, X0, grid)
    chain = ep.analytic_chain(model, traj, CASE2_THETA, 5)
    return model, traj, chain


def draw_theta(model_id, rng):
    """Random parameters comfortably inside each model's box."""
    u = rng.uniform
    if model_id in ("sirs", "sirs-ext"):
        return np.array([u(0.1, 1.0), u(0.1, 1.5), u(0.05, 0.8),
                         u(0.02, 0.5)])
    if model_id == "sir":
        return np.array([u(0.1, 1.0), u(0.1, 1.5), u(0.05, 0.8)])
    if model_id == "sir-demog":
        return np.array([u(0.1, 1.0), u(0.1, 1.5), u(0.05, 0.8),
                         u(0.02, 0.4)])
    if model_id == "sirv":
        return np.array([u(0.2, 1.0), u(0.05, 0.6), u(0.05, 0.3)])
    if model_id == "sir-incidence":
        return np.array([u(0.1, 1.5), u(0.05, 0.8)])
    if model_id == "siv-demog":
        return np.array([u(0.2, 1.0), u(0.5, 2.5), u(0.2, 0.6),
                         u(0.05, 0.4)])
    raise KeyError(model_id)


def draw_x0(model_id, theta, rng):
    """Random initial state inside the invariant region, away from the
    output-degenerate sets."""
    u = rng.uniform
    if model_id == "siv-demog":
        cap = theta[0] / theta[2]
        s = u(0.15, 0.5) * cap
        i = u(0.1, 0.4) * cap
        v = u(0.0, 0.9) * (cap - s - i)
        return np.array([s, i, v])
    if model_id == "sirv":
        s = u(0.3, 0.8)
        i = u(0.05, min(0.5, 0.95 - s))
        v = u(0.0, 1.0) * (1.0 - s - i - 0.01)
        return np.array([s, i, v])
    s = u(0.2, 0.85)
    i = u(0.05, min(0.6, 0.98 - s))
    return np.array([s, i])
