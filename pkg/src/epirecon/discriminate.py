"""Deciding between immunity loss and no immunity loss from short-time data.

Two tests run on an exact output chain: the first solves the extended-model
regression and reads the verdict off the two coefficients that vanish
exactly when immunity loss is absent; the second checks the linear
dependence of {d/dt(y'/y), y, y'}, which holds identically without immunity
loss and fails with it. A third routine verifies the perturbation bound
that explains why small loss rates are hard to tell apart.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .chains import DerivativeChain
from .errors import BoundViolated, DegenerateWindow, OutputNearZero
from .integrate import GridSpec
from .jets import jdiv, jshift
from .models import SIR_REGIME_TOL, get_model
from .reconstruct import solve_multitime

#: below this normalized smallest singular value the three functions are
#: declared dependent (no-immunity-loss regime)
DEP_TOL = 1e-8
MIN_SAMPLES = 10


@dataclass
class Verdict:
    verdict: str                  # "SIR", "SIRS" or "Neither"
    sigma: Optional[np.ndarray]
    dependence_residual: Optional[float]
    thresholds: dict
    window: tuple


def discriminate_approach1(chain: DerivativeChain, window=None,
                           tol_sir: float = SIR_REGIME_TOL) -> Verdict:
    """Solve the extended regression; classify by the immunity-loss terms."""
    model = get_model("sirs-ext")
    if window is None:
        window = (float(chain.times[0]), float(chain.times[-1]) + chain.h)
    sigma, _ = solve_multitime(model, chain, window=window)
    s1, s3 = abs(sigma[0]), abs(sigma[2])
    if s1 <= tol_sir and s3 <= tol_sir:
        verdict = "SIR"
    elif s3 > tol_sir:
        verdict = "SIRS"
    else:
        verdict = "Neither"
    return Verdict(verdict=verdict, sigma=sigma, dependence_residual=None,
                   thresholds={"tol_sir": tol_sir}, window=tuple(window))


def discriminate_approach2(chain: DerivativeChain, window=None,
                           dep_tol: float = DEP_TOL) -> Verdict:
    """Dependence test on {d/dt(y'/y), y, y'} over the window samples."""
    if window is None:
        window = (float(chain.times[0]), float(chain.times[-1]) + chain.h)
    idx = chain.window_indices(window)
    if len(idx) < MIN_SAMPLES:
        raise DegenerateWindow(
            f"window holds {len(idx)} samples, need {MIN_SAMPLES}")
    y = chain.values[0][:, idx]
    if y.shape[0] < 3:
        raise ValueError("chain must carry derivatives up to order 2")
    if np.min(np.abs(y[0])) <= 1e-14:
        raise OutputNearZero("|y| vanishes inside the window")
    scale = max(1.0, float(np.max(np.abs(y[0]))))
    if np.max(np.abs(y[1])) <= 1e-13 * scale:
        raise DegenerateWindow(
            "output is constant on the window; the three test functions "
            "collapse and carry no verdict")
    ratio = jdiv(jshift(y, 1), y)          # y'/y
    w = jshift(ratio, 1)[0]                # d/dt (y'/y)
    cols = np.column_stack([w, y[0], y[1]])
    svals = np.linalg.svd(cols, compute_uv=False)
    resid = float(svals[-1] / svals[0])
    verdict = "SIR" if resid <= dep_tol else "SIRS"
    return Verdict(verdict=verdict, sigma=None, dependence_residual=resid,
                   thresholds={"dep_tol": dep_tol}, window=tuple(window))


@dataclass
class ClosenessReport:
    times: np.ndarray
    states_sir: np.ndarray
    states_sirs: np.ndarray
    gap: np.ndarray
    bound: np.ndarray
    lipschitz: float
    max_gap: float


def sir_lipschitz_bound(beta: float, gamma: float, n: int = 201) -> float:
    """Max spectral norm of the immunity-loss-free Jacobian over the simplex."""
    s = np.linspace(0.0, 1.0, n)
    ss, ii = np.meshgrid(s, s, indexing="ij")
    keep = ss + ii <= 1.0 + 1e-12
    ss, ii = ss[keep], ii[keep]
    a = -beta * ii
    b = -beta * ss
    c = beta * ii
    d = beta * ss - gamma
    frob2 = a * a + b * b + c * c + d * d
    det = a * d - b * c
    inner = np.maximum(frob2 * frob2 - 4.0 * det * det, 0.0)
    smax2 = 0.5 * (frob2 + np.sqrt(inner))
    return float(np.sqrt(smax2.max()))


def closeness_bound_check(theta_sir, mu: float, x0, grid: GridSpec
                          ) -> ClosenessReport:
    """Integrate both variants from a shared state and verify the growth bound.

    The bound is (mu/L) * (exp(L*t) - 1) with L the Jacobian-norm constant,
    valid because the immunity-loss term has norm at most mu on the simplex.
    """
    beta, gamma = float(theta_sir[0]), float(theta_sir[1])
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    x0 = np.asarray(x0, dtype=float)
    n = grid.n_steps
    sir = _kernels.integrate_grid(_kernels.K_SIR,
                                  np.array([0.0, beta, gamma]), x0,
                                  grid.h, n)
    sirs = _kernels.integrate_grid(_kernels.K_SIRS,
                                   np.array([0.0, beta, gamma, mu]), x0,
                                   grid.h, n)
    times = grid.times()
    gap = np.linalg.norm(sir - sirs, axis=1)
    lip = sir_lipschitz_bound(beta, gamma)
    bound = (mu / lip) * np.expm1(lip * (times - grid.t0))
    bad = gap > bound
    if np.any(bad):
        worst = int(np.argmax(gap - bound))
        raise BoundViolated(
            f"measured gap {gap[worst]:.3e} exceeds bound {bound[worst]:.3e} "
            f"at t={times[worst]}")
    return ClosenessReport(times=times, states_sir=sir, states_sirs=sirs,
                           gap=gap, bound=bound, lipschitz=lip,
                           max_gap=float(gap.max()))
