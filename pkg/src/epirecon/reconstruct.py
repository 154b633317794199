"""Recovery of parameters and initial conditions from output chains.

Two routes solve the structural-regression linear systems:

* multi-time: rows are the regression evaluated at several selected grid
  times (as many as the block has unknowns),
* wronskian: rows are time derivatives of the regression at one grid time,
  stacked up to one less than the block size.

Either way the solved coefficients are pushed through the model's inverse
coefficient map, the state is read off the output derivatives, and, when
the evaluation time is positive, pulled back to time zero by reversed
integration.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chains import DerivativeChain
from .errors import (NumericallySingular, OrderUnsupported,
                     SingularEverywhere, WronskianVanishes)
from .integrate import GridSpec, integrate_backward
from .models import (ModelDef, PartialCombos, extended_sirs_theta_or_combos,
                     pull_back_combos, sir_partial_combos)

#: above this condition number a solve is reported but flagged untrusted
COND_UNTRUSTED = 1e12
#: at or below this relative smallest singular value the rows are declared
#: linearly dependent (equilibrium data lands here, far below any
#: legitimately conditioned system)
DEPENDENT_REL_SMIN = 1e-13
DET_FLOOR = 1e-300
#: residual gate for an accepted linear solve
RESIDUAL_REL = 1e-8


@dataclass
class BlockSolve:
    times: np.ndarray
    sigma: np.ndarray
    det_value: float
    cond_number: float


@dataclass
class ReconstructionResult:
    model_id: str
    method: str
    sigma: np.ndarray
    theta_hat: Optional[np.ndarray]
    combos: Optional[PartialCombos]
    regime: Optional[str]
    x0_hat: Optional[np.ndarray]
    times_used: np.ndarray
    det_value: float
    cond_number: float
    trusted: bool
    theta_in_box: Optional[bool]
    elapsed_seconds: float
    blocks: list = field(default_factory=list)


def _matrix_diag(mat: np.ndarray):
    det = float(np.linalg.det(mat))
    svals = np.linalg.svd(mat, compute_uv=False)
    smax, smin = float(svals[0]), float(svals[-1])
    cond = np.inf if smin == 0.0 else smax / smin
    rel_smin = 0.0 if smax == 0.0 else smin / smax
    return det, cond, rel_smin


def _solve_block(mat: np.ndarray, rhs: np.ndarray, vanish_error):
    det, cond, rel_smin = _matrix_diag(mat)
    if abs(det) <= DET_FLOOR or rel_smin <= DEPENDENT_REL_SMIN:
        raise vanish_error(
            f"regression rows are linearly dependent (|det|={abs(det):.3e}, "
            f"relative smallest singular value {rel_smin:.3e}); the data "
            "carry no parameter information here")
    sigma = np.linalg.solve(mat, rhs)
    resid = np.max(np.abs(mat @ sigma - rhs))
    gate = RESIDUAL_REL * max(np.max(np.abs(rhs)), DET_FLOOR)
    if not np.all(np.isfinite(sigma)) or resid > gate:
        raise NumericallySingular(
            f"linear solve residual {resid:.3e} exceeds {gate:.3e}")
    return sigma, det, cond


def _greedy_volume_rows(rows: np.ndarray) -> list:
    """Indices of rows spanning (near-)maximal volume: greedy + pair swaps."""
    n, q = rows.shape
    resid = rows.astype(float).copy()
    chosen: list = []
    for _ in range(q):
        norms = np.linalg.norm(resid, axis=1)
        norms[chosen] = -1.0
        best = int(np.argmax(norms))
        if norms[best] <= 0.0:
            for i in range(n):  # degenerate data; final conditioning check decides
                if i not in chosen:
                    chosen.append(i)
                    break
            continue
        chosen.append(best)
        u = resid[best] / norms[best]
        resid -= np.outer(resid @ u, u)

    def vol(sel):
        return abs(np.linalg.det(rows[sel]))

    current = vol(chosen)
    for _ in range(20):
        improved = False
        for pos in range(q):
            for cand in range(n):
                if cand in chosen:
                    continue
                trial = chosen.copy()
                trial[pos] = cand
                v = vol(trial)
                if v > current * (1.0 + 1e-12):
                    chosen, current = trial, v
                    improved = True
        if not improved:
            break
    return sorted(chosen)


def _multitime_blocks(model: ModelDef, chain: DerivativeChain, window,
                      times=None) -> list:
    reg = model.regression
    for c, need in enumerate(reg.d_prime):
        if chain.orders[c] < need:
            raise OrderUnsupported(
                f"chain holds orders {chain.orders}, model '{model.id}' "
                f"needs {reg.d_prime} per channel")
    if window is None:
        window = (chain.times[0], chain.times[-1] + chain.h)
    idx = chain.window_indices(window)
    jets = [ch[:, idx] for ch in chain.values]
    prior: dict = {}
    solves: dict = {}
    for b in reg.solve_order:
        block = reg.blocks[b]
        if len(idx) < block.size:
            raise SingularEverywhere(
                f"window holds {len(idx)} grid points, block needs "
                f"{block.size}")
        target, regs = block.rows(jets, prior, 1)
        rows = np.column_stack([r[0] for r in regs])
        rhs_all = target[0]
        if times is not None:
            sel = []
            for t in times[b]:
                hits = np.nonzero(np.abs(chain.times[idx] - t) <= 1e-9)[0]
                if len(hits) == 0:
                    raise ValueError(f"t={t} is not a grid time inside the "
                                     "window")
                sel.append(int(hits[0]))
        else:
            sel = _greedy_volume_rows(rows)
        mat = rows[sel]
        rhs = rhs_all[sel]
        sigma, det, cond = _solve_block(mat, rhs, SingularEverywhere)
        prior[b] = sigma
        solves[b] = BlockSolve(times=chain.times[idx][sel], sigma=sigma,
                               det_value=det, cond_number=cond)
    return [solves[b] for b in range(len(reg.blocks))]


def select_times_multitime(model: ModelDef, chain: DerivativeChain,
                           window=None) -> list:
    """Per-block evaluation times whose regression rows are invertible."""
    return [bs.times for bs in _multitime_blocks(model, chain, window)]


def solve_multitime(model: ModelDef, chain: DerivativeChain, window=None,
                    times=None):
    """Solve every regression block from rows at selected grid times.

    Returns the flat coefficient vector and the per-block solve records.
    """
    solves = _multitime_blocks(model, chain, window, times=times)
    sigma = np.concatenate([bs.sigma for bs in solves])
    return sigma, solves


def _wronskian_blocks(model: ModelDef, chain: DerivativeChain,
                      t_tilde: float) -> list:
    reg = model.regression
    if reg.wronskian_orders is None:
        raise OrderUnsupported(
            f"the single-time method would need output derivatives beyond "
            f"order 5 for model '{model.id}'")
    for c, need in enumerate(reg.wronskian_orders):
        if chain.orders[c] < need:
            raise OrderUnsupported(
                f"chain holds orders {chain.orders}, the single-time method "
                f"needs {reg.wronskian_orders}")
    pos = chain.index_of(t_tilde)
    jets = [ch[:, pos:pos + 1] for ch in chain.values]
    prior: dict = {}
    solves: dict = {}
    for b in reg.solve_order:
        block = reg.blocks[b]
        depth = block.size
        target, regs = block.rows(jets, prior, depth)
        mat = np.column_stack([r[:, 0] for r in regs])
        rhs = target[:, 0]
        sigma, det, cond = _solve_block(mat, rhs, WronskianVanishes)
        prior[b] = sigma
        solves[b] = BlockSolve(times=np.array([t_tilde]), sigma=sigma,
                               det_value=det, cond_number=cond)
    return [solves[b] for b in range(len(reg.blocks))]


def solve_wronskian(model: ModelDef, chain: DerivativeChain, t_tilde: float):
    """Solve every block from derivative-stacked rows at one grid time."""
    solves = _wronskian_blocks(model, chain, t_tilde)
    sigma = np.concatenate([bs.sigma for bs in solves])
    return sigma, solves


def recover_theta(sigma, model: ModelDef, tol_sir: Optional[float] = None):
    """Invert the coefficient map; may yield the identifiable combinations."""
    if model.id == "sirs-ext" and tol_sir is not None:
        return extended_sirs_theta_or_combos(sigma, tol_sir)
    return model.theta_from_coeffs(sigma)


def recover_x0(chain: DerivativeChain, theta_hat, model: ModelDef,
               t_tilde: float, h: Optional[float] = None):
    """State at time zero. With full parameters this inverts the output map
    at ``t_tilde`` and integrates backwards if needed; with the partial SIR
    combinations it returns the rescaled pair (beta*S0, k*I0) instead."""
    h = chain.h if h is None else h
    pos = chain.index_of(t_tilde)
    point = chain.point(pos)
    if isinstance(theta_hat, PartialCombos):
        combos = sir_partial_combos(
            np.array([theta_hat.gamma * theta_hat.beta_over_k,
                      theta_hat.beta_over_k]),
            float(point[0][0]), float(point[0][1]), at_time=t_tilde)
        return pull_back_combos(combos, h)
    state = model.invert_output(point, np.asarray(theta_hat, dtype=float))
    if t_tilde > 0.0:
        grid = GridSpec(h=h, t_max=t_tilde, t0=0.0)
        state = integrate_backward(model, theta_hat, state, t_tilde, grid)
    return state


def _finish(model, method, sigma, solves, theta_or_combos, x0, elapsed):
    if isinstance(theta_or_combos, PartialCombos):
        theta_hat, combos, regime, in_box = None, theta_or_combos, "SIR", None
        if isinstance(x0, PartialCombos):
            combos, x0 = x0, None
    else:
        theta_hat = np.asarray(theta_or_combos, dtype=float)
        combos = None
        regime = "SIRS" if model.id == "sirs-ext" else None
        in_box = model.theta_in_box(theta_hat)
    return ReconstructionResult(
        model_id=model.id, method=method, sigma=np.asarray(sigma),
        theta_hat=theta_hat, combos=combos, regime=regime,
        x0_hat=None if x0 is None else np.asarray(x0),
        times_used=np.concatenate([bs.times for bs in solves]),
        det_value=min(abs(bs.det_value) for bs in solves),
        cond_number=max(bs.cond_number for bs in solves),
        trusted=all(bs.cond_number <= COND_UNTRUSTED for bs in solves),
        theta_in_box=in_box, elapsed_seconds=elapsed,
        blocks=solves)


def reconstruct_multitime(model: ModelDef, chain: DerivativeChain,
                          window=None, times=None,
                          x0_time: Optional[float] = None,
                          tol_sir: Optional[float] = None
                          ) -> ReconstructionResult:
    """Full recovery via rows at several selected times per block."""
    start = time.perf_counter()
    sigma, solves = solve_multitime(model, chain, window=window, times=times)
    theta = recover_theta(sigma, model, tol_sir)
    t_ref = float(chain.times[0]) if x0_time is None else float(x0_time)
    x0 = recover_x0(chain, theta, model, t_ref)
    return _finish(model, "multitime", sigma, solves, theta, x0,
                   time.perf_counter() - start)


def reconstruct_wronskian(model: ModelDef, chain: DerivativeChain,
                          t_tilde: float, x0_time: Optional[float] = None,
                          tol_sir: Optional[float] = None
                          ) -> ReconstructionResult:
    """Full recovery from output derivatives at a single grid time."""
    start = time.perf_counter()
    sigma, solves = solve_wronskian(model, chain, t_tilde)
    theta = recover_theta(sigma, model, tol_sir)
    t_ref = float(chain.times[0]) if x0_time is None else float(x0_time)
    x0 = recover_x0(chain, theta, model, t_ref)
    return _finish(model, "wronskian", sigma, solves, theta, x0,
                   time.perf_counter() - start)


def wronskian_sweep(model: ModelDef, chain: DerivativeChain,
                    x0_time: Optional[float] = None,
                    tol_sir: Optional[float] = None) -> list:
    """One single-time reconstruction per grid point, in grid order."""
    return [reconstruct_wronskian(model, chain, float(t), x0_time=x0_time,
                                  tol_sir=tol_sir)
            for t in chain.times]
