"""Linear-system recovery: selected-times and single-time routes, inverse
maps, state pullback, and the equilibrium degeneracies."""

import numpy as np
import pytest

import epirecon as ep
from epirecon.errors import (OrderUnsupported, OutputNearZero,
                             SigmaDegenerate, SingularEverywhere,
                             WronskianVanishes)
from epirecon.models import PartialCombos

from conftest import (CASE1_THETA, COMBOS2, H, SIGMA1, SIGMA2, X0,
                      draw_theta, draw_x0)


# --- time selection ------------------------------------------------------------

def test_select_times_case1(case1):
    model, _, chain = case1
    [times] = ep.select_times_multitime(model, chain, window=(0.0, 5.0))
    assert len(times) == 4
    assert len(np.unique(times)) == 4
    assert np.all((times >= 0.0) & (times < 5.0))
    # deterministic
    [times2] = ep.select_times_multitime(model, chain, window=(0.0, 5.0))
    assert np.array_equal(times, times2)


def test_select_times_on_endemic_equilibrium_data(grid):
    model = ep.get_model("sirs")
    ee = model.equilibria(CASE1_THETA).ee
    traj = ep.integrate(model, CASE1_THETA, ee, grid)
    chain = ep.analytic_chain(model, traj, CASE1_THETA, 2)
    with pytest.raises(SingularEverywhere):
        ep.select_times_multitime(model, chain, window=(0.0, 5.0))


def test_zero_output_fails_upstream(grid):
    model = ep.get_model("sirs")
    traj = ep.integrate(model, CASE1_THETA, [1.0, 0.0], grid)
    with pytest.raises(OutputNearZero):
        ep.analytic_chain(model, traj, CASE1_THETA, 2)


# --- selected-times solve --------------------------------------------------------

def test_multitime_case1_coefficients(case1):
    model, _, chain = case1
    sigma, solves = ep.solve_multitime(model, chain, window=(0.0, 5.0))
    assert np.max(np.abs(sigma / SIGMA1 - 1.0)) <= 1e-9
    assert abs(solves[0].det_value) > 0.0
    assert 1e1 <= solves[0].cond_number <= 1e8


def test_multitime_exact_rows_round_trip():
    # rows built from a known coefficient vector must reproduce it
    rng = np.random.default_rng(2)
    mat = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
    sigma_star = rng.normal(size=4)
    rhs = mat @ sigma_star
    from epirecon.reconstruct import _solve_block
    sigma, _, _ = _solve_block(mat, rhs, SingularEverywhere)
    assert np.max(np.abs(sigma / sigma_star - 1.0)) <= 1e-12


def test_multitime_extended_model_on_sir_data(case2):
    _, _, chain = case2
    ext = ep.get_model("sirs-ext")
    sigma, _ = ep.solve_multitime(ext, chain, window=(0.0, 5.0))
    assert abs(sigma[0]) <= 1e-8
    assert abs(sigma[2]) <= 1e-8
    assert sigma[3] == pytest.approx(SIGMA2[1], rel=1e-8)


def test_multitime_explicit_times(case1):
    model, _, chain = case1
    times = [np.array([0.0, 1.0, 2.0, 4.0])]
    sigma, solves = ep.solve_multitime(model, chain, times=times)
    assert np.array_equal(solves[0].times, times[0])
    assert np.max(np.abs(sigma / SIGMA1 - 1.0)) <= 1e-8


# --- single-time (wronskian) solve ------------------------------------------------

def test_wronskian_sweep_case1(case1):
    model, _, chain = case1
    import time as _time
    tic = _time.perf_counter()
    sweep = ep.wronskian_sweep(model, chain)
    elapsed = _time.perf_counter() - tic
    assert len(sweep) == 161
    errs = np.array([np.max(np.abs(r.sigma / SIGMA1 - 1.0)) for r in sweep])
    assert np.max(errs) <= 1e-9
    dets = np.array([r.det_value for r in sweep])
    assert np.all((dets > 1e-20) & (dets < 1e-14))  # tiny but nonzero
    conds = np.array([r.cond_number for r in sweep])
    assert np.all((conds >= 1e2) & (conds <= 1e7))
    assert all(r.trusted for r in sweep)
    assert elapsed < 1.0


def test_wronskian_time_shift_robustness(case1):
    # recovery succeeds at (at least) 99 percent of grid times
    model, _, chain = case1
    failures = 0
    for t in chain.times:
        try:
            ep.solve_wronskian(model, chain, float(t))
        except (WronskianVanishes, OutputNearZero):
            failures += 1
    assert failures <= len(chain.times) * 0.01


def test_wronskian_agrees_with_multitime(case1):
    model, _, chain = case1
    sig_m, _ = ep.solve_multitime(model, chain, window=(0.0, 5.0))
    sig_w, _ = ep.solve_wronskian(model, chain, 1.0)
    assert np.max(np.abs(sig_w / sig_m - 1.0)) <= 1e-8


def test_wronskian_rows_match_fd_of_regressor_series(case1):
    # derivative-stacked rows vs finite differences of the regressor values
    model, _, chain = case1
    block = model.regression.blocks[0]
    target_series, reg_series = block.rows(chain.jets(), {}, 1)
    pos = chain.index_of(2.0)
    jets_pt = [ch[:, pos:pos + 1] for ch in chain.values]
    target_pt, regs_pt = block.rows(jets_pt, {}, 4)
    for series, point_jet in zip(list(reg_series) + [target_series],
                                 list(regs_pt) + [target_pt]):
        fd = ep.finite_difference_chain(series[0], H, 3, accuracy=4)
        for k in range(4):
            scale = max(np.max(np.abs(fd.values[0][k])), 1e-12)
            assert abs(point_jet[k, 0] - fd.values[0][k, pos]) <= 1e-5 * scale


def test_wronskian_vanishes_on_equilibrium_data(grid):
    model = ep.get_model("sirs")
    ee = model.equilibria(CASE1_THETA).ee
    traj = ep.integrate(model, CASE1_THETA, ee, grid)
    chain = ep.analytic_chain(model, traj, CASE1_THETA, 5)
    with pytest.raises(WronskianVanishes):
        ep.solve_wronskian(model, chain, 1.0)


def test_wronskian_unsupported_models(grid):
    model = ep.get_model("sirv")
    theta = np.array([0.3, 0.1, 0.05])
    traj = ep.integrate(model, theta, [0.8, 0.1, 0.05], grid)
    chain = ep.analytic_chain(model, traj, theta, 3)
    with pytest.raises(OrderUnsupported):
        ep.solve_wronskian(model, chain, 1.0)


# --- parameter recovery ------------------------------------------------------------

def test_recover_theta_benchmark(case1):
    model, _, _ = case1
    theta = ep.recover_theta(SIGMA1, model)
    assert np.allclose(theta, CASE1_THETA, rtol=1e-12)


def test_recover_theta_sir_regime():
    ext = ep.get_model("sirs-ext")
    out = ep.recover_theta(np.array([0.0, SIGMA2[0], 0.0, SIGMA2[1]]), ext)
    assert isinstance(out, PartialCombos)
    assert out.gamma == pytest.approx(0.1, rel=1e-12)
    assert out.beta_over_k == pytest.approx(SIGMA2[1], rel=1e-12)


def test_recover_theta_degenerate_signature():
    ext = ep.get_model("sirs-ext")
    with pytest.raises(SigmaDegenerate):
        ep.recover_theta(np.array([0.01, 0.1, 0.0, 0.8]), ext)


# --- state recovery ---------------------------------------------------------------

def test_recover_x0_direct(case1):
    model, _, chain = case1
    x0 = ep.recover_x0(chain, CASE1_THETA, model, 0.0)
    assert np.max(np.abs(x0 - X0)) <= 1e-9


def test_recover_x0_with_backward_integration(case1):
    model, _, chain = case1
    x0 = ep.recover_x0(chain, CASE1_THETA, model, 2.0)
    assert np.max(np.abs(x0 - X0)) <= 1e-7


def test_recover_x0_partial_combos(case2):
    model, _, chain = case2
    combos = PartialCombos(gamma=0.1, beta_over_k=SIGMA2[1])
    out = ep.recover_x0(chain, combos, model, 0.0)
    assert isinstance(out, PartialCombos)
    assert out.beta_S == pytest.approx(COMBOS2[2], abs=1e-8)
    assert out.k_I == pytest.approx(0.03, abs=1e-8)


def test_recover_x0_partial_combos_from_late_time(case2):
    model, _, chain = case2
    combos = PartialCombos(gamma=0.1, beta_over_k=SIGMA2[1])
    out = ep.recover_x0(chain, combos, model, 1.0)
    assert out.at_time == 0.0
    assert out.beta_S == pytest.approx(COMBOS2[2], abs=1e-8)
    assert out.k_I == pytest.approx(0.03, abs=1e-8)


# --- end-to-end -------------------------------------------------------------------

def test_full_recovery_random_draws(grid):
    model = ep.get_model("sirs")
    rng = np.random.default_rng(41)
    done = 0
    while done < 50:
        theta = draw_theta("sirs", rng)
        x0 = draw_x0("sirs", theta, rng)
        eq = model.equilibria(theta)
        if eq.ee is not None and np.linalg.norm(x0 - eq.ee) < 0.05:
            continue
        traj = ep.integrate(model, theta, x0, grid)
        chain = ep.analytic_chain(model, traj, theta, 5)
        res = ep.reconstruct_wronskian(model, chain, 1.0)
        assert np.max(np.abs(res.theta_hat / theta - 1.0)) <= 1e-6
        assert np.max(np.abs(res.x0_hat / x0 - 1.0)) <= 1e-6
        done += 1


def test_reconstruct_multitime_result_fields(case1):
    model, _, chain = case1
    res = ep.reconstruct_multitime(model, chain, window=(0.0, 5.0))
    assert res.method == "multitime"
    assert res.model_id == "sirs"
    assert res.theta_in_box is True
    assert res.trusted is True
    assert len(res.times_used) == 4
    assert res.elapsed_seconds >= 0.0
    assert np.max(np.abs(res.theta_hat / CASE1_THETA - 1.0)) <= 1e-9
    assert np.max(np.abs(res.x0_hat - X0)) <= 1e-9


def test_reconstruct_extended_regime_labels(case1, case2):
    ext = ep.get_model("sirs-ext")
    res1 = ep.reconstruct_multitime(ext, case1[2], window=(0.0, 5.0))
    assert res1.regime == "SIRS" and res1.combos is None
    res2 = ep.reconstruct_multitime(ext, case2[2], window=(0.0, 5.0))
    assert res2.regime == "SIR" and res2.theta_hat is None
    assert res2.combos.beta_S == pytest.approx(COMBOS2[2], abs=1e-8)


@pytest.mark.parametrize("model_id", ["sir-demog", "sirv", "sir-incidence",
                                      "siv-demog"])
def test_multitime_recovery_other_models(model_id, grid):
    model = ep.get_model(model_id)
    rng = np.random.default_rng(19)
    for _ in range(5):
        theta = draw_theta(model_id, rng)
        x0 = draw_x0(model_id, theta, rng)
        traj = ep.integrate(model, theta, x0, grid)
        chain = ep.analytic_chain(model, traj, theta,
                                  max(model.regression.d_prime))
        res = ep.reconstruct_multitime(model, chain)
        assert np.max(np.abs(res.theta_hat / theta - 1.0)) <= 1e-6, model_id
        assert np.max(np.abs(res.x0_hat / x0 - 1.0)) <= 1e-5, model_id
