"""Derivative chains: the analytic recursion against the finite-difference
oracle, stencil exactness, and the degeneracy guards."""

import numpy as np
import pytest

import epirecon as ep
from epirecon.chains import fd_weights
from epirecon.errors import OrderUnsupported, OutputNearZero, TooFewSamples
from epirecon.jets import jdiv, jmul

from conftest import CASE1_THETA, CASE2_THETA, H, TMAX, X0, draw_theta, \
    draw_x0


# --- jet arithmetic -----------------------------------------------------------

def test_jet_product_matches_polynomial():
    # f = 2 + 3t + t^2, g = 1 - t: derivatives of f*g at t=0
    f = np.array([2.0, 3.0, 2.0, 0.0])   # value, f', f'', f'''
    g = np.array([1.0, -1.0, 0.0, 0.0])
    prod = jmul(f, g)
    # f*g = 2 + t - 2t^2 - t^3 -> derivatives (2, 1, -4, -6)
    assert np.allclose(prod, [2.0, 1.0, -4.0, -6.0])


def test_jet_quotient_inverts_product():
    rng = np.random.default_rng(0)
    a = rng.normal(size=6)
    b = rng.normal(size=6)
    b[0] = 2.0 + abs(b[0])
    assert np.allclose(jdiv(jmul(a, b), b), a, atol=1e-12)


# --- finite differences ---------------------------------------------------------

def test_fd_weights_first_derivative_centered():
    w = fd_weights(1, np.array([-1.0, 0.0, 1.0]), 0.0)
    assert np.allclose(w, [-0.5, 0.0, 0.5])


def test_fd_exact_for_quadratic():
    t = 0.1 * np.arange(30)
    chain = ep.finite_difference_chain(t ** 2, 0.1, 2)
    assert np.allclose(chain.values[0][2], 2.0, rtol=0, atol=1e-10)
    assert np.allclose(chain.values[0][1], 2.0 * t, rtol=0, atol=1e-10)


def test_fd_exponential_first_derivative_at_zero():
    # centered window so t = 0 is an interior point; the truncation bound
    # there is h^2/6 ~ 1.6e-4
    h = 2.0 ** -5
    t = h * np.arange(-32, 32)
    chain = ep.finite_difference_chain(np.exp(t), h, 1, times=t)
    at_zero = 32
    assert not chain.boundary[at_zero]
    assert abs(chain.values[0][1, at_zero] - 1.0) <= 2e-4
    interior = ~chain.boundary
    rel = np.abs(chain.values[0][1] / np.exp(t) - 1.0)
    assert np.max(rel[interior]) <= 2e-4


def test_fd_constant_signal():
    chain = ep.finite_difference_chain(np.full(40, 3.5), 1.0, 3)
    assert np.all(chain.values[0][1:] == 0.0)  # unit-spacing weights are exact
    coarse = ep.finite_difference_chain(np.full(40, 3.5), 0.1, 3)
    assert np.allclose(coarse.values[0][1:], 0.0, atol=1e-9)


def test_fd_too_few_samples():
    with pytest.raises(TooFewSamples):
        ep.finite_difference_chain(np.arange(8.0), 0.1, 4)


def test_fd_boundary_flags():
    chain = ep.finite_difference_chain(np.arange(30.0) ** 2, 1.0, 3)
    assert chain.boundary[0] and chain.boundary[1]
    assert chain.boundary[-1] and chain.boundary[-2]
    assert not chain.boundary[5]


# --- analytic chains -------------------------------------------------------------

def test_case1_chain_start_values(case1):
    _, _, chain = case1
    y = chain.values[0]
    assert y[0, 0] == pytest.approx(0.03, abs=1e-17)
    assert y[1, 0] == pytest.approx(0.00375, abs=1e-17)


def test_chain_order_zero_matches_output_map(case1):
    model, traj, chain = case1
    out = model.output_map(traj.states, CASE1_THETA)[:, 0]
    assert np.max(np.abs(chain.values[0][0] - out)) <= 1e-12


def test_first_order_matches_lie_derivative(case1):
    model, traj, chain = case1
    k, beta, gamma, _ = CASE1_THETA
    s, i = traj.states[:, 0], traj.states[:, 1]
    direct = k * (beta * s * i - gamma * i)
    assert np.max(np.abs(chain.values[0][1] - direct)) <= 1e-12


def test_second_order_recursion_closure(case1):
    # the regression-driven second derivative equals the direct chain rule
    model, traj, chain = case1
    k, beta, gamma, mu = CASE1_THETA
    s, i = traj.states[:, 0], traj.states[:, 1]
    y, ydot = chain.values[0][0], chain.values[0][1]
    sdot = -beta * s * i + mu * (1.0 - s - i)
    direct = beta * sdot * y + (beta * s - gamma) * ydot
    rel = np.abs(chain.values[0][2] - direct) / np.maximum(np.abs(direct),
                                                           1e-30)
    assert np.max(rel) <= 1e-10


def test_equilibrium_chain_is_flat(grid):
    model = ep.get_model("sirs")
    ee = model.equilibria(CASE1_THETA).ee
    traj = ep.integrate(model, CASE1_THETA, ee, grid)
    chain = ep.analytic_chain(model, traj, CASE1_THETA, 5)
    assert np.max(np.abs(chain.values[0][1:])) <= 1e-12


def _fd_reference(model_id, theta, x0, orders):
    """Centered finite differences of the order-0 samples on the case grid.

    Wide (accuracy-4) stencils keep both truncation and cancellation below
    the 1e-6 comparison tolerance at this step size.
    """
    model = ep.get_model(model_id)
    grid = ep.GridSpec(h=H, t_max=TMAX)
    traj = ep.integrate(model, theta, x0, grid)
    chain = ep.analytic_chain(model, traj, theta, orders)
    refs = []
    for ch in chain.values:
        refs.append(ep.finite_difference_chain(ch[0], H, orders, accuracy=4))
    return chain, refs


@pytest.mark.parametrize("model_id,theta,x0", [
    ("sirs", CASE1_THETA, X0),
    ("sir", CASE2_THETA, X0),
])
def test_analytic_vs_fd_oracle_cases(model_id, theta, x0):
    chain, refs = _fd_reference(model_id, np.asarray(theta, float),
                                np.asarray(x0, float), 3)
    for ch, ref in zip(chain.values, refs):
        interior = ~ref.boundary
        for order in range(1, 4):
            scale = np.max(np.abs(ch[order]))
            err = np.abs(ch[order] - ref.values[0][order])[interior]
            assert np.max(err) <= 1e-6 * scale, (model_id, order)


@pytest.mark.parametrize("model_id", ["sirs-ext", "sir-demog", "sirv",
                                      "sir-incidence", "siv-demog"])
def test_analytic_vs_fd_oracle_catalog(model_id):
    rng = np.random.default_rng(17)
    theta = draw_theta(model_id, rng)
    x0 = draw_x0(model_id, theta, rng)
    chain, refs = _fd_reference(model_id, theta, x0, 3)
    for ch, ref in zip(chain.values, refs):
        interior = ~ref.boundary
        for order in range(1, 4):
            scale = np.max(np.abs(ch[order]))
            err = np.abs(ch[order] - ref.values[0][order])[interior]
            assert np.max(err) <= 1e-6 * scale, (model_id, order)


def test_case1_orders_beyond_three_by_series_differentiation(case1):
    # the single-time solver consumes orders 4 and 5: cross-check each by
    # numerically differentiating the already-validated series one order down
    _, _, chain = case1
    y = chain.values[0]
    for k in (3, 4):
        ref = ep.finite_difference_chain(y[k], H, 1, accuracy=6)
        interior = ~ref.boundary
        scale = np.max(np.abs(y[k + 1]))
        err = np.abs(ref.values[0][1] - y[k + 1])[interior]
        assert np.max(err) <= 1e-10 * scale


def test_chain_aborts_on_zero_output(grid):
    model = ep.get_model("sirs")
    traj = ep.integrate(model, CASE1_THETA, [1.0, 0.0], grid)
    with pytest.raises(OutputNearZero):
        ep.analytic_chain(model, traj, CASE1_THETA, 5)


def test_chain_order_limits(case1):
    model, traj, _ = case1
    with pytest.raises(OrderUnsupported):
        ep.analytic_chain(model, traj, CASE1_THETA, 6)
    incidence = ep.get_model("sir-incidence")
    t2 = ep.integrate(incidence, CASE2_THETA[1:], X0,
                      ep.GridSpec(h=H, t_max=TMAX))
    with pytest.raises(OrderUnsupported):
        ep.analytic_chain(incidence, t2, CASE2_THETA[1:], 4)


def test_chain_csv_round_trip(tmp_path, case1):
    from epirecon import fileio
    _, _, chain = case1
    path = tmp_path / "chain.csv"
    fileio.write_chain_csv(path, chain)
    back = fileio.read_chain_csv(path)
    assert np.array_equal(back.times, chain.times)
    assert np.array_equal(back.values[0], chain.values[0])
