"""Fixed-step classical RK4 integration of the catalog models.

Forward and backward in time, with membership monitoring against each
model's invariant region. Backward integration reuses the forward stepper
on the time-reversed field (a negated step), so a single kernel serves both
directions.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InvariantViolation, StepCountOverflow

#: roundoff-scale negative entries are snapped back to the boundary
CLAMP_TOL = 1e-12
#: beyond this the trajectory is considered to have left the invariant region
VIOLATION_TOL = 1e-6
#: membership slack used when verifying returned states
MEMBERSHIP_TOL = 1e-9

MAX_STEPS = 10**8


@dataclass(frozen=True)
class GridSpec:
    """Uniform time grid: step ``h`` on [t0, t_max], all in days."""

    h: float
    t_max: float
    t0: float = 0.0

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if self.t_max <= self.t0:
            raise ValueError(f"need t_max > t0, got [{self.t0}, {self.t_max}]")
        n = (self.t_max - self.t0) / self.h
        if abs(n - round(n)) > 1e-9:
            raise ValueError(
                f"(t_max - t0)/h = {n} is not an integer number of steps")

    @property
    def n_steps(self) -> int:
        return int(round((self.t_max - self.t0) / self.h))

    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class Trajectory:
    """States on a uniform grid, stored together with the grid itself."""

    times: np.ndarray
    states: np.ndarray  # (len(times), state_dim)
    model_id: str
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise DimensionMismatch(
                f"{len(self.times)} times vs {len(self.states)} states")

    @property
    def h(self) -> float:
        return float(self.times[1] - self.times[0])

    def state_at(self, t: float) -> np.ndarray:
        idx = self.index_of(t)
        return self.states[idx]

    def index_of(self, t: float) -> int:
        """Grid index of time ``t``; the time must lie on the grid."""
        idx = int(round((t - self.times[0]) / self.h))
        if idx < 0 or idx >= len(self.times) or abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"t={t} is not on the trajectory grid")
        return idx


def _check_step_count(n_steps: int):
    if n_steps > MAX_STEPS:
        raise StepCountOverflow(f"grid implies {n_steps} > {MAX_STEPS} steps")


def _clamp_and_verify(model, states: np.ndarray, theta: np.ndarray):
    """Snap roundoff-scale negatives to zero; reject genuine exits from Omega."""
    tiny = (states < 0) & (states >= -CLAMP_TOL)
    states[tiny] = 0.0
    worst = model.omega_violation(states, theta)
    if worst > MEMBERSHIP_TOL:
        raise InvariantViolation(
            f"state exits the invariant region of '{model.id}' by {worst:.3e}"
            + ("" if worst > VIOLATION_TOL else
               f" (beyond membership tolerance {MEMBERSHIP_TOL:g})"))


def integrate(model, theta, x0, grid: GridSpec) -> Trajectory:
    """Integrate ``model`` forward over ``grid`` with classical RK4.

    Raises
    ------
    DimensionMismatch, StepCountOverflow, InvariantViolation, ThetaOutOfBox
    """
    theta = np.asarray(theta, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (model.state_dim,):
        raise DimensionMismatch(
            f"x0 has shape {x0.shape}, model '{model.id}' expects "
            f"({model.state_dim},)")
    if theta.shape != (len(model.param_names),):
        raise DimensionMismatch(
            f"theta has {theta.size} entries, model '{model.id}' expects "
            f"{len(model.param_names)}")
    model.check_theta(theta)
    worst = model.omega_violation(x0[None, :], theta)
    if worst > MEMBERSHIP_TOL:
        raise InvariantViolation(
            f"x0 outside the invariant region of '{model.id}' by {worst:.3e}")
    _check_step_count(grid.n_steps)

    states = _kernels.integrate_grid(model.kernel_id, theta, x0, grid.h,
                                     grid.n_steps)
    if not np.all(np.isfinite(states)):
        raise InvariantViolation("non-finite state during integration")
    _clamp_and_verify(model, states, theta)
    return Trajectory(times=grid.times(), states=states, model_id=model.id,
                      theta=theta)


def integrate_backward(model, theta, x_at_t, t_from: float,
                       grid: GridSpec) -> np.ndarray:
    """State at ``grid.t0`` reached by integrating the reversed field from ``t_from``."""
    theta = np.asarray(theta, dtype=float)
    x_at_t = np.asarray(x_at_t, dtype=float)
    if x_at_t.shape != (model.state_dim,):
        raise DimensionMismatch(
            f"state has shape {x_at_t.shape}, model '{model.id}' expects "
            f"({model.state_dim},)")
    if not np.all(np.isfinite(x_at_t)):
        raise InvariantViolation("non-finite starting state")
    if t_from <= grid.t0:
        raise ValueError(f"t_from={t_from} must exceed grid.t0={grid.t0}")
    n = (t_from - grid.t0) / grid.h
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"t_from={t_from} is not a whole number of steps "
                         f"above t0={grid.t0}")
    n_steps = int(round(n))
    _check_step_count(n_steps)

    states = _kernels.integrate_grid(model.kernel_id, theta, x_at_t,
                                     -grid.h, n_steps)
    if not np.all(np.isfinite(states)):
        raise InvariantViolation("non-finite state during backward integration")
    _clamp_and_verify(model, states, theta)
    return states[-1]
