"""Catalog of the compartmental model configurations.

Each entry packages, for one model/output pairing:

* the vector field and output map,
* the parameter box and the invariant region test,
* the structural regression: a linear-in-coefficients identity
  ``target(chain) = sum_l coeffs_l * regressor_l(chain)`` satisfied by the
  output signal and its derivatives along every trajectory,
* the map from parameters to those coefficients and its inverse,
* the inversion from output derivatives back to the state vector,
* the closed-form derivative recursion used to extend output chains,
* the equilibria.

All derivative manipulation goes through :mod:`epirecon.jets`; nothing here
differentiates interpolants or uses a symbolic engine.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import OrderUnsupported, OutputNearZero, SigmaDegenerate, ThetaOutOfBox
from .jets import jconst, jdiv, jmul, jshift

#: output magnitudes at or below this floor abort chain/regression divisions
Y_FLOOR = 1e-14
#: margin used to enforce strictly-open parameter bounds
STRICT_MARGIN = 1e-14
#: default threshold deciding the immunity-loss-free regime of the extended model
SIR_REGIME_TOL = 1e-7

_INF = float("inf")


@dataclass(frozen=True)
class PartialCombos:
    """Identifiable combinations of the fraction-observed SIR model.

    Full parameter recovery is impossible for this configuration; only these
    combinations are determined, so they are kept as a distinct result kind
    and never coerced into a parameter vector.
    """

    gamma: float
    beta_over_k: float
    beta_S: Optional[float] = None
    k_I: Optional[float] = None
    #: the time the beta_S / k_I values refer to (0.0 once pulled back)
    at_time: float = 0.0


@dataclass(frozen=True)
class Equilibria:
    dfe: Optional[np.ndarray]
    ee: Optional[np.ndarray]
    r0: Optional[float]


@dataclass(frozen=True)
class RegressionBlock:
    """One block of the structural regression.

    ``rows(jets, prior, depth)`` returns the target jet and the regressor
    jets truncated to ``depth`` derivative levels. ``jets`` holds one array
    of shape (orders_i+1, ...) per output channel; ``prior`` maps block
    indices to already-solved coefficient vectors (used by the two-output
    demography model, whose second block feeds the first).
    """

    size: int
    rows: Callable


@dataclass(frozen=True)
class StructuralRegression:
    blocks: tuple
    #: block indices in the order they must be solved
    solve_order: tuple
    #: chain orders per output channel needed to evaluate one row
    d_prime: tuple
    #: chain orders per channel needed for the derivative-stacked (wronskian)
    #: single-time system; None when that method would exceed order 5
    wronskian_orders: Optional[tuple]

    @property
    def total_size(self) -> int:
        return sum(b.size for b in self.blocks)

    def block_slices(self):
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b.size))
            start += b.size
        return out


@dataclass(frozen=True)
class ModelDef:
    id: str
    kernel_id: int
    state_dim: int
    output_dim: int
    state_names: tuple
    param_names: tuple
    theta_box: tuple  # (lo, hi, lo_strict) per parameter; hi may be inf
    regression: StructuralRegression
    vector_field: Callable
    output_map: Callable
    coeffs_from_theta: Callable
    theta_from_coeffs: Callable
    invert_output: Callable
    chain_fn: Callable
    equilibria_fn: Callable
    omega_kind: str = "simplex"
    #: highest derivative order the chain recursion supports
    chain_order_cap: int = 5

    def check_theta(self, theta) -> None:
        theta = np.asarray(theta, dtype=float)
        for name, value, (lo, hi, lo_strict) in zip(self.param_names, theta,
                                                    self.theta_box):
            low_ok = value >= lo + STRICT_MARGIN if lo_strict else value >= lo
            if not low_ok or value > hi:
                raise ThetaOutOfBox(
                    f"{self.id}: {name}={value} outside "
                    f"{'(' if lo_strict else '['}{lo}, {hi}]")

    def theta_in_box(self, theta) -> bool:
        try:
            self.check_theta(theta)
        except ThetaOutOfBox:
            return False
        return True

    def omega_violation(self, states: np.ndarray, theta) -> float:
        """Largest excursion of the given states outside the invariant region."""
        states = np.atleast_2d(states)
        worst = max(0.0, float(-states.min()))
        total = states.sum(axis=1)
        if self.omega_kind == "siv":
            a, delta = float(theta[0]), float(theta[2])
            cap = a / delta
        else:
            cap = 1.0
        worst = max(worst, float(total.max() - cap))
        return max(worst, 0.0)

    def omega_test(self, x, theta, tol: float = 1e-9) -> bool:
        return self.omega_violation(np.asarray(x, dtype=float)[None, :],
                                    theta) <= tol

    def equilibria(self, theta) -> Equilibria:
        return self.equilibria_fn(np.asarray(theta, dtype=float))


def _require_output(values: np.ndarray, label: str):
    if np.min(np.abs(values)) <= Y_FLOOR:
        raise OutputNearZero(
            f"|{label}| <= {Y_FLOOR:g} at some evaluation point")


def _nonzero(value: float, label: str) -> float:
    if abs(value) <= Y_FLOOR:
        raise SigmaDegenerate(f"{label} vanishes ({value:.3e}); the "
                              "coefficient map cannot be inverted here")
    return value


# ---------------------------------------------------------------------------
# shared machinery for the fraction-of-infected family (sirs / sir / demog)
# ---------------------------------------------------------------------------

def _quadratic_rows(y: np.ndarray, depth: int, lead_sign: float):
    """Rows of the second-order output identity shared by the kI-output family.

    target = y'' - y'^2/y, regressors = (lead_sign*y, -y^2, -y', -y*y').
    """
    if y.shape[0] < depth + 2:
        raise ValueError("chain too short for requested row depth")
    _require_output(y[0], "y")
    yd = jshift(y, 1)
    target = jshift(y, 2)[:depth] - jdiv(jmul(yd, yd), y)[:depth]
    regs = [lead_sign * y[:depth], -jmul(y, y)[:depth], -yd[:depth],
            -jmul(y, yd)[:depth]]
    return target, regs


def _extend_quadratic_chain(y0: np.ndarray, y1: np.ndarray, c: np.ndarray,
                            max_order: int) -> np.ndarray:
    """Iterated total derivatives of y'' = y'^2/y + c1*y + c2*y^2 + c3*y' + c4*y*y'.

    Returns derivatives 0..max_order stacked along axis 0.
    """
    _require_output(y0, "y")
    u = np.zeros((max_order + 1,) + np.shape(y0))
    u[0], u[1] = y0, y1
    for k in range(max_order - 1):
        jet = u[:k + 2]
        yd = jshift(jet, 1)
        quot = jdiv(jmul(yd, yd), jet)
        sq = jmul(jet, jet)
        cross = jmul(jet, yd)
        u[k + 2] = (quot[k] + c[0] * u[k] + c[1] * sq[k] + c[2] * u[k + 1]
                    + c[3] * cross[k])
    return u


# --- sirs ------------------------------------------------------------------

def _sirs_vf(x, theta):
    s, i = x
    _, beta, gamma, mu = theta
    return np.array([-beta * s * i + mu * (1.0 - s - i),
                     beta * s * i - gamma * i])


def _sirs_output(states, theta):
    return theta[0] * states[:, 1:2]


def _sirs_coeffs(theta):
    k, beta, gamma, mu = theta
    return np.array([mu * (gamma - beta), beta / k * (gamma + mu), mu,
                     beta / k])


def _sirs_theta(sigma):
    s1, s2, s3, s4 = sigma
    _nonzero(s3, "sigma3")
    _nonzero(s4, "sigma4")
    beta = s2 / s4 - s3 - s1 / s3
    return np.array([beta / s4, beta, s2 / s4 - s3, s3])


def _sirs_invert(jets, theta):
    y = jets[0]
    _require_output(y[0], "y")
    _, beta, gamma, _ = theta
    return np.array([(y[1] / y[0] + gamma) / beta, y[0] / theta[0]])


def _sirs_chain(states, theta, max_order):
    k, beta, gamma = theta[0], theta[1], theta[2]
    y0 = k * states[:, 1]
    y1 = (beta * states[:, 0] - gamma) * y0
    if max_order <= 1:
        return [np.stack([y0, y1][:max_order + 1])]
    return [_extend_quadratic_chain(y0, y1, -_sirs_coeffs(theta), max_order)]


def _sirs_equilibria(theta):
    _, beta, gamma, mu = theta
    r0 = beta / gamma
    ee = None
    if r0 > 1.0 and mu > 0.0:
        ee = np.array([1.0 / r0, mu * (1.0 - 1.0 / r0) / (gamma + mu)])
    return Equilibria(dfe=np.array([1.0, 0.0]), ee=ee, r0=r0)


def _sirs_rows(jets, prior, depth):
    return _quadratic_rows(jets[0], depth, lead_sign=-1.0)


# --- sir (fraction of infected observed) -----------------------------------

def _sir_vf(x, theta):
    s, i = x
    _, beta, gamma = theta
    return np.array([-beta * s * i, beta * s * i - gamma * i])


def _sir_coeffs(theta):
    k, beta, gamma = theta
    return np.array([beta * gamma / k, beta / k])


def _sir_theta(sigma):
    s1, s2 = sigma
    _nonzero(s2, "sigma2")
    return PartialCombos(gamma=s1 / s2, beta_over_k=s2)


def _sir_invert(jets, theta):
    y = jets[0]
    _require_output(y[0], "y")
    _, beta, gamma = theta
    return np.array([(y[1] / y[0] + gamma) / beta, y[0] / theta[0]])


def _sir_chain(states, theta, max_order):
    k, beta, gamma = theta
    y0 = k * states[:, 1]
    y1 = (beta * states[:, 0] - gamma) * y0
    if max_order <= 1:
        return [np.stack([y0, y1][:max_order + 1])]
    s1, s2 = _sir_coeffs(theta)
    return [_extend_quadratic_chain(y0, y1, np.array([0.0, -s1, 0.0, -s2]),
                                    max_order)]


def _sir_rows(jets, prior, depth):
    y = jets[0]
    if y.shape[0] < depth + 2:
        raise ValueError("chain too short for requested row depth")
    _require_output(y[0], "y")
    yd = jshift(y, 1)
    target = jshift(y, 2)[:depth] - jdiv(jmul(yd, yd), y)[:depth]
    return target, [-jmul(y, y)[:depth], -jmul(y, yd)[:depth]]


def _sir_equilibria(theta):
    return Equilibria(dfe=np.array([1.0, 0.0]), ee=None,
                      r0=theta[1] / theta[2])


def sir_partial_combos(sigma, y0: float, ydot0: float,
                       at_time: float = 0.0) -> PartialCombos:
    """All four identifiable combinations from solved coefficients and (y, y')."""
    s1, s2 = sigma
    _nonzero(s2, "sigma2")
    if abs(y0) <= Y_FLOOR:
        raise OutputNearZero("|y| too small to form the combinations")
    gamma = s1 / s2
    return PartialCombos(gamma=gamma, beta_over_k=s2,
                         beta_S=ydot0 / y0 + gamma, k_I=y0, at_time=at_time)


def pull_back_combos(combos: PartialCombos, h: float) -> PartialCombos:
    """Transport (beta*S, k*I) from ``combos.at_time`` back to time zero.

    Uses the closed SIR dynamics of the rescaled pair, which involve only
    the identified combinations, so no unidentifiable quantity is needed.
    """
    if combos.at_time == 0.0:
        return combos
    n = combos.at_time / h
    if abs(n - round(n)) > 1e-9:
        raise ValueError("at_time must be a whole number of steps")
    states = _kernels.integrate_grid(
        _kernels.K_SIR_XY, np.array([combos.beta_over_k, combos.gamma]),
        np.array([combos.beta_S, combos.k_I]), -h, int(round(n)))
    return PartialCombos(gamma=combos.gamma, beta_over_k=combos.beta_over_k,
                         beta_S=float(states[-1, 0]), k_I=float(states[-1, 1]),
                         at_time=0.0)


# --- extended sirs (mu may vanish; discrimination workhorse) ----------------

def extended_sirs_theta_or_combos(sigma, tol_sir: float = SIR_REGIME_TOL):
    """Invert the extended-model coefficients, detecting the mu=0 regime.

    Returns a full parameter vector when the immunity-loss signature is
    present, the identifiable SIR combinations when both regime coefficients
    vanish, and raises SigmaDegenerate when the signature is contradictory.
    """
    s1, s2, s3, s4 = np.asarray(sigma, dtype=float)
    if abs(s1) <= tol_sir and abs(s3) <= tol_sir:
        _nonzero(s4, "sigma4")
        return PartialCombos(gamma=s2 / s4, beta_over_k=s4)
    if abs(s3) > tol_sir:
        return _sirs_theta(sigma)
    raise SigmaDegenerate(
        f"sigma1={s1:.3e} nonzero while sigma3={s3:.3e} vanishes: the "
        "observations match neither regime")


# --- sir with demography ----------------------------------------------------

def _demog_vf(x, theta):
    s, i = x
    _, beta, gamma, delta = theta
    return np.array([delta - beta * s * i - delta * s,
                     beta * s * i - (gamma + delta) * i])


def _demog_coeffs(theta):
    k, beta, gamma, delta = theta
    return np.array([delta * (beta - gamma - delta),
                     beta / k * (gamma + delta), delta, beta / k])


def _demog_theta(sigma):
    s1, s2, s3, s4 = sigma
    _nonzero(s3, "sigma3")
    _nonzero(s4, "sigma4")
    beta = s1 / s3 + s2 / s4
    return np.array([beta / s4, beta, s2 / s4 - s3, s3])


def _demog_invert(jets, theta):
    y = jets[0]
    _require_output(y[0], "y")
    _, beta, gamma, delta = theta
    return np.array([(y[1] / y[0] + gamma + delta) / beta, y[0] / theta[0]])


def _demog_chain(states, theta, max_order):
    k, beta, gamma, delta = theta
    y0 = k * states[:, 1]
    y1 = (beta * states[:, 0] - (gamma + delta)) * y0
    if max_order <= 1:
        return [np.stack([y0, y1][:max_order + 1])]
    sig = _demog_coeffs(theta)
    return [_extend_quadratic_chain(
        y0, y1, np.array([sig[0], -sig[1], -sig[2], -sig[3]]), max_order)]


def _demog_rows(jets, prior, depth):
    return _quadratic_rows(jets[0], depth, lead_sign=1.0)


def _demog_equilibria(theta):
    _, beta, gamma, delta = theta
    r0 = beta / (gamma + delta)
    ee = None
    if r0 > 1.0:
        ee = np.array([1.0 / r0, delta * (1.0 - 1.0 / r0) / (gamma + delta)])
    return Equilibria(dfe=np.array([1.0, 0.0]), ee=ee, r0=r0)


# --- sirv (vaccination-rate output) -----------------------------------------

def _sirv_vf(x, theta):
    s, i, v = x
    beta, gamma, nu = theta
    return np.array([-beta * s * i - nu * s, beta * s * i - gamma * i,
                     nu * s])


def _sirv_output(states, theta):
    return theta[2] * (1.0 - states[:, 2:3])


def _sirv_coeffs(theta):
    beta, gamma, nu = theta
    return np.array([nu * gamma, beta / nu, gamma, beta / nu ** 2])


def _sirv_theta(sigma):
    s1, s2, s3, _ = sigma
    _nonzero(s3, "sigma3")
    nu = s1 / s3
    return np.array([s2 * nu, s3, nu])


def _sirv_invert(jets, theta):
    y = jets[0]
    _require_output(y[1], "y'")
    beta, _, nu = theta
    return np.array([-y[1] / nu ** 2, -(y[2] / y[1] + nu) / beta,
                     1.0 - y[0] / nu])


def _sirv_chain(states, theta, max_order):
    beta, gamma, nu = theta
    y0 = nu * (1.0 - states[:, 2])
    if max_order == 0:
        return [y0[None, :]]
    z0 = -nu ** 2 * states[:, 0]
    z1 = -z0 * (beta * states[:, 1] + nu)
    if max_order == 1:
        shifted = np.stack([z0])
    else:
        _require_output(z0, "y'")
        shifted = _extend_quadratic_chain(z0, z1, -_sirv_coeffs(theta),
                                          max_order - 1)
    return [np.concatenate([y0[None, :], shifted], axis=0)]


def _sirv_rows(jets, prior, depth):
    z = jshift(jets[0], 1)
    if z.shape[0] < depth + 2:
        raise ValueError("chain too short for requested row depth")
    _require_output(z[0], "y'")
    zd = jshift(z, 1)
    target = jshift(z, 2)[:depth] - jdiv(jmul(zd, zd), z)[:depth]
    regs = [-z[:depth], -jmul(z, z)[:depth], -zd[:depth],
            -jmul(z, zd)[:depth]]
    return target, regs


def _sirv_equilibria(theta):
    # every point with S = I = 0 is stationary; no distinguished equilibrium
    return Equilibria(dfe=None, ee=None, r0=None)


# --- sir with incidence output ----------------------------------------------

def _incidence_vf(x, theta):
    s, i = x
    beta, gamma = theta
    return np.array([-beta * s * i, beta * s * i - gamma * i])


def _incidence_output(states, theta):
    return theta[0] * states[:, 0:1] * states[:, 1:2]


def _incidence_coeffs(theta):
    beta, gamma = theta
    return np.array([gamma, 2.0 * beta * gamma, beta * gamma ** 2,
                     4.0 * beta, 4.0 * beta ** 2, gamma ** 2])


def _incidence_theta(sigma):
    return np.array([sigma[3] / 4.0, sigma[0]])


def _incidence_invert(jets, theta):
    y = jets[0]
    _require_output(y[0], "y")
    beta, gamma = theta
    u = y[1] / y[0]
    w = y[2] / y[0] - u ** 2
    i = w / (beta * gamma) + 2.0 * y[0] / gamma
    return np.array([u / beta + i + gamma / beta, i])


def _incidence_chain(states, theta, max_order):
    if max_order > 3:
        raise OrderUnsupported(
            "incidence-output chain is hand-coded to order 3")
    beta, gamma = theta
    s, i = states[:, 0], states[:, 1]
    y0 = beta * s * i
    rate = beta * s - beta * i - gamma
    y1 = y0 * rate
    di = beta * s * i - gamma * i
    rate_d = -2.0 * beta * y0 + beta * gamma * i
    y2 = y1 * rate + y0 * rate_d
    rate_dd = -2.0 * beta * y1 + beta * gamma * di
    y3 = y2 * rate + 2.0 * y1 * rate_d + y0 * rate_dd
    return [np.stack([y0, y1, y2, y3][:max_order + 1])]


def _incidence_rows(jets, prior, depth):
    y = jets[0]
    if y.shape[0] < depth + 2:
        raise ValueError("chain too short for requested row depth")
    _require_output(y[0], "y")
    u = jdiv(jshift(y, 1), y)        # y'/y
    w = jshift(u, 1)                 # d/dt (y'/y)
    target = -jmul(w, w)[:depth]
    regs = [jmul(u, w)[:depth], jshift(y, 1)[:depth], y[:depth],
            jmul(y, w)[:depth], jmul(y, y)[:depth], w[:depth]]
    return target, regs


def _incidence_equilibria(theta):
    return Equilibria(dfe=np.array([1.0, 0.0]), ee=None,
                      r0=theta[0] / theta[1])


# --- siv with demography, two outputs ---------------------------------------

def _siv_vf(x, theta):
    s, i, v = x
    a, beta, delta, nu = theta
    return np.array([a - beta * s * i - (nu + delta) * s,
                     beta * s * i - delta * i,
                     nu * s - delta * v])


def _siv_output(states, theta):
    a, beta, delta, nu = theta
    y1 = nu * (states[:, 0] + states[:, 1])
    y2 = delta * states.sum(axis=1)
    return np.column_stack([y1, y2])


def _siv_coeffs(theta):
    a, beta, delta, nu = theta
    return np.array([
        a * nu ** 2 * (delta * nu - a * beta) / beta,
        nu * (a * nu + 2.0 * a * delta - (delta * nu ** 2 + delta ** 2 * nu) / beta),
        nu * (2.0 * a - (nu ** 2 + 2.0 * delta * nu) / beta),
        nu,
        nu ** 2 / beta,
        a * delta,
        delta,
    ])


def _siv_theta(sigma):
    sigma = np.asarray(sigma, dtype=float)
    _nonzero(sigma[4], "sigma5")
    _nonzero(sigma[6], "sigma7")
    delta = sigma[6]
    return np.array([sigma[5] / delta, sigma[3] ** 2 / sigma[4], delta,
                     sigma[3]])


def _siv_invert(jets, theta):
    y1, y2 = jets
    a, beta, delta, nu = theta
    s = a / nu - delta * y1[0] / nu ** 2 - y1[1] / nu ** 2
    i = (nu + delta) / nu ** 2 * y1[0] - a / nu + y1[1] / nu ** 2
    v = y2[0] / delta - y1[0] / nu
    return np.array([s, i, v])


def _siv_chain(states, theta, max_order):
    if max_order > 3:
        raise OrderUnsupported("two-output chain is hand-coded to order 3")
    a, beta, delta, nu = theta
    s, i, v = states[:, 0], states[:, 1], states[:, 2]
    ds = a - beta * s * i - (nu + delta) * s
    di = beta * s * i - delta * i
    p0 = nu * (s + i)
    p1 = nu * a - delta * p0 - nu ** 2 * s
    p2 = -delta * p1 - nu ** 2 * ds
    dds = -beta * (ds * i + s * di) - (nu + delta) * ds
    p3 = -delta * p2 - nu ** 2 * dds
    q0 = delta * (s + i + v)
    q1 = a * delta - delta * q0
    q2 = -delta * q1
    q3 = -delta * q2
    return [np.stack([p0, p1, p2, p3][:max_order + 1]),
            np.stack([q0, q1, q2, q3][:max_order + 1])]


def _siv_rows_main(jets, prior, depth):
    """Death-rate block must be solved first; its decay coefficient feeds here."""
    if 1 not in prior:
        raise ValueError("death-rate block must be solved before this one")
    delta = float(prior[1][1])
    y1 = jets[0]
    if y1.shape[0] < depth + 2:
        raise ValueError("chain too short for requested row depth")
    yd = jshift(y1, 1)
    w = yd[:depth + 1] + delta * y1[:depth + 1]
    target = jmul(w, w)[:depth]
    regs = [jconst(1.0, depth, like=y1), y1[:depth], yd[:depth],
            -jmul(y1[:depth + 1], w)[:depth], -jshift(y1, 2)[:depth]]
    return target, regs


def _siv_rows_death(jets, prior, depth):
    y2 = jets[1]
    if y2.shape[0] < depth + 1:
        raise ValueError("chain too short for requested row depth")
    target = jshift(y2, 1)[:depth]
    return target, [jconst(1.0, depth, like=y2), -y2[:depth]]


def _siv_equilibria(theta):
    a, beta, delta, nu = theta
    dfe = np.array([a / (nu + delta), 0.0, nu * a / (delta * (nu + delta))])
    r0 = a * beta / (delta * (nu + delta))
    ee = None
    if r0 > 1.0:
        ee = np.array([delta / beta, a / delta - (nu + delta) / beta,
                       nu / beta])
    return Equilibria(dfe=dfe, ee=ee, r0=r0)


# ---------------------------------------------------------------------------
# catalog assembly
# ---------------------------------------------------------------------------

_POS = (0.0, _INF, True)
_UNIT_OPEN = (0.0, 1.0, True)
_NONNEG = (0.0, _INF, False)

_SIRS_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(4, _sirs_rows),),
    solve_order=(0,), d_prime=(2,), wronskian_orders=(5,))

_SIR_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(2, _sir_rows),),
    solve_order=(0,), d_prime=(2,), wronskian_orders=(3,))

_DEMOG_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(4, _demog_rows),),
    solve_order=(0,), d_prime=(2,), wronskian_orders=(5,))

_SIRV_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(4, _sirv_rows),),
    solve_order=(0,), d_prime=(3,), wronskian_orders=None)

_INCIDENCE_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(6, _incidence_rows),),
    solve_order=(0,), d_prime=(2,), wronskian_orders=None)

_SIV_REGRESSION = StructuralRegression(
    blocks=(RegressionBlock(5, _siv_rows_main),
            RegressionBlock(2, _siv_rows_death)),
    solve_order=(1, 0), d_prime=(2, 1), wronskian_orders=None)


def _build_catalog():
    sirs = ModelDef(
        id="sirs", kernel_id=_kernels.K_SIRS, state_dim=2, output_dim=1,
        state_names=("S", "I"), param_names=("k", "beta", "gamma", "mu"),
        theta_box=(_UNIT_OPEN, _POS, _POS, _POS),
        regression=_SIRS_REGRESSION,
        vector_field=_sirs_vf, output_map=_sirs_output,
        coeffs_from_theta=_sirs_coeffs, theta_from_coeffs=_sirs_theta,
        invert_output=_sirs_invert, chain_fn=_sirs_chain,
        equilibria_fn=_sirs_equilibria)
    sirs_ext = ModelDef(
        id="sirs-ext", kernel_id=_kernels.K_SIRS, state_dim=2, output_dim=1,
        state_names=("S", "I"), param_names=("k", "beta", "gamma", "mu"),
        theta_box=(_UNIT_OPEN, _POS, _POS, _NONNEG),
        regression=_SIRS_REGRESSION,
        vector_field=_sirs_vf, output_map=_sirs_output,
        coeffs_from_theta=_sirs_coeffs,
        theta_from_coeffs=extended_sirs_theta_or_combos,
        invert_output=_sirs_invert, chain_fn=_sirs_chain,
        equilibria_fn=_sirs_equilibria)
    sir = ModelDef(
        id="sir", kernel_id=_kernels.K_SIR, state_dim=2, output_dim=1,
        state_names=("S", "I"), param_names=("k", "beta", "gamma"),
        theta_box=(_UNIT_OPEN, _POS, _POS),
        regression=_SIR_REGRESSION,
        vector_field=_sir_vf, output_map=_sirs_output,
        coeffs_from_theta=_sir_coeffs, theta_from_coeffs=_sir_theta,
        invert_output=_sir_invert, chain_fn=_sir_chain,
        equilibria_fn=_sir_equilibria)
    demog = ModelDef(
        id="sir-demog", kernel_id=_kernels.K_SIR_DEMOG, state_dim=2,
        output_dim=1, state_names=("S", "I"),
        param_names=("k", "beta", "gamma", "delta"),
        theta_box=(_UNIT_OPEN, _POS, _POS, _POS),
        regression=_DEMOG_REGRESSION,
        vector_field=_demog_vf, output_map=_sirs_output,
        coeffs_from_theta=_demog_coeffs, theta_from_coeffs=_demog_theta,
        invert_output=_demog_invert, chain_fn=_demog_chain,
        equilibria_fn=_demog_equilibria)
    sirv = ModelDef(
        id="sirv", kernel_id=_kernels.K_SIRV, state_dim=3, output_dim=1,
        state_names=("S", "I", "V"), param_names=("beta", "gamma", "nu"),
        theta_box=(_POS, _POS, _POS),
        regression=_SIRV_REGRESSION,
        vector_field=_sirv_vf, output_map=_sirv_output,
        coeffs_from_theta=_sirv_coeffs, theta_from_coeffs=_sirv_theta,
        invert_output=_sirv_invert, chain_fn=_sirv_chain,
        equilibria_fn=_sirv_equilibria)
    incidence = ModelDef(
        id="sir-incidence", kernel_id=_kernels.K_SIR_INCIDENCE, state_dim=2,
        output_dim=1, state_names=("S", "I"), param_names=("beta", "gamma"),
        theta_box=(_POS, _POS),
        regression=_INCIDENCE_REGRESSION,
        vector_field=_incidence_vf, output_map=_incidence_output,
        coeffs_from_theta=_incidence_coeffs,
        theta_from_coeffs=_incidence_theta,
        invert_output=_incidence_invert, chain_fn=_incidence_chain,
        equilibria_fn=_incidence_equilibria, chain_order_cap=3)
    siv = ModelDef(
        id="siv-demog", kernel_id=_kernels.K_SIV, state_dim=3, output_dim=2,
        state_names=("S", "I", "V"), param_names=("A", "beta", "delta", "nu"),
        theta_box=(_POS, _POS, _POS, _POS),
        regression=_SIV_REGRESSION,
        vector_field=_siv_vf, output_map=_siv_output,
        coeffs_from_theta=_siv_coeffs, theta_from_coeffs=_siv_theta,
        invert_output=_siv_invert, chain_fn=_siv_chain,
        equilibria_fn=_siv_equilibria, omega_kind="siv", chain_order_cap=3)
    return (sirs, sir, sirs_ext, demog, sirv, incidence, siv)


_CATALOG = _build_catalog()
_BY_ID = {m.id: m for m in _CATALOG}


def model_catalog():
    """All packaged model configurations (six distinct plus the extended alias)."""
    return list(_CATALOG)


def get_model(model_id: str) -> ModelDef:
    try:
        return _BY_ID[model_id]
    except KeyError:
        raise KeyError(
            f"unknown model '{model_id}'; choose from "
            f"{sorted(_BY_ID)}") from None


def regression_terms(model: ModelDef, chain_point, prior=None):
    """Evaluate one regression row (values only) at a single chain point.

    ``chain_point`` holds, per output channel, the derivative values
    (y, y', ...) as a 1-D array. Returns per block the target value and the
    regressor values.
    """
    jets = [np.asarray(ch, dtype=float)[:, None] for ch in chain_point]
    prior = dict(prior or {})
    out = []
    for idx in model.regression.solve_order:
        block = model.regression.blocks[idx]
        target, regs = block.rows(jets, prior, 1)
        out.append((idx, float(target[0, 0]),
                    np.array([r[0, 0] for r in regs])))
    out.sort(key=lambda item: item[0])
    return [(t, r) for _, t, r in out]
