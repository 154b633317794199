"""Output signals and their time derivatives along a trajectory.

The analytic chain evaluates each model's closed-form derivative recursion
pointwise from the stored states and parameters. The finite-difference
chain is an independent validation oracle built from output samples alone.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OrderUnsupported, TooFewSamples
from .integrate import Trajectory

MAX_ORDER = 5


@dataclass(frozen=True)
class DerivativeChain:
    """Per-channel derivative values on a time grid.

    ``values[c]`` has shape (orders[c]+1, len(times)); row k holds the k-th
    derivative of output channel c.
    """

    times: np.ndarray
    values: list
    model_id: str = ""
    #: True where a one-sided stencil was used (finite-difference chains only)
    boundary: np.ndarray | None = None

    def __post_init__(self):
        for ch in self.values:
            if ch.shape[-1] != len(self.times):
                raise ValueError("channel length does not match the grid")

    @property
    def orders(self) -> list:
        return [ch.shape[0] - 1 for ch in self.values]

    @property
    def h(self) -> float:
        return float(self.times[1] - self.times[0])

    def index_of(self, t: float) -> int:
        idx = int(round((t - self.times[0]) / self.h))
        if idx < 0 or idx >= len(self.times) or abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"t={t} is not on the chain grid")
        return idx

    def point(self, idx: int) -> list:
        """Per-channel derivative values at one grid index."""
        return [ch[:, idx] for ch in self.values]

    def jets(self) -> list:
        """Per-channel derivative arrays over the whole grid."""
        return list(self.values)

    def window_indices(self, window) -> np.ndarray:
        a, b = window
        mask = (self.times >= a - 1e-12) & (self.times < b - 1e-12)
        return np.nonzero(mask)[0]


def analytic_chain(model, traj: Trajectory, theta, max_order: int = MAX_ORDER
                   ) -> DerivativeChain:
    """Output derivatives up to ``max_order`` from states and parameters.

    Order 0 is the output map, order 1 the closed-form first derivative, and
    higher orders come from iterated total differentiation of the model's
    structural identity, all evaluated pointwise on the stored states.
    """
    if max_order > MAX_ORDER:
        raise OrderUnsupported(f"chains support orders up to {MAX_ORDER}")
    if max_order < 0:
        raise OrderUnsupported("negative derivative order")
    theta = np.asarray(theta, dtype=float)
    model.check_theta(theta)
    channels = model.chain_fn(traj.states, theta, max_order)
    for ch in channels:
        if not np.all(np.isfinite(ch)):
            raise OrderUnsupported("non-finite derivative values in chain")
    return DerivativeChain(times=traj.times.copy(), values=channels,
                           model_id=model.id)


def fd_weights(order: int, grid: np.ndarray, center: float) -> np.ndarray:
    """Finite-difference weights for the given derivative order.

    Fornberg's recursion on arbitrary nodes; exact for polynomials of degree
    < len(grid).
    """
    n = len(grid)
    if order >= n:
        raise ValueError("need more nodes than the derivative order")
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1, c4 = 1.0, grid[0] - center
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, grid[i] - center
        for j in range(i):
            c3 = grid[i] - grid[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1]
                                    - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def finite_difference_chain(values, h: float, max_order: int,
                            times=None, accuracy: int = 2) -> DerivativeChain:
    """Derivative oracle from uniform samples of a single output channel.

    Interior points use centered stencils of the requested even accuracy
    order (default 2) per derivative order; near the ends the stencil
    shifts one-sided and the point is flagged in ``boundary``. Wider
    stencils (accuracy 4 or 6) push truncation below roundoff on coarse
    grids, at the price of a wider flagged boundary band.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    if max_order > MAX_ORDER:
        raise OrderUnsupported(f"chains support orders up to {MAX_ORDER}")
    if accuracy < 2 or accuracy % 2:
        raise ValueError("accuracy must be an even integer >= 2")
    pad = (accuracy - 2) // 2
    if n < 2 * (max_order + pad) + 1:
        raise TooFewSamples(
            f"{n} samples cannot support order {max_order} at accuracy "
            f"{accuracy} (need {2 * (max_order + pad) + 1})")
    if times is None:
        times = h * np.arange(n)
    out = np.zeros((max_order + 1, n))
    out[0] = values
    boundary = np.zeros(n, dtype=bool)
    for order in range(1, max_order + 1):
        half = (order + 1) // 2 + pad  # centered width 2*half+1
        width = 2 * half + 1
        offsets = np.arange(-half, half + 1)
        weights = fd_weights(order, offsets * h, 0.0)
        core = np.convolve(values, weights[::-1], mode="valid")
        out[order, half:n - half] = core
        for i in range(half):
            nodes = np.arange(width)
            w = fd_weights(order, nodes * h, i * h)
            out[order, i] = w @ values[:width]
            w = fd_weights(order, nodes * h, (width - 1 - i) * h)
            out[order, n - 1 - i] = w @ values[n - width:]
            boundary[i] = True
            boundary[n - 1 - i] = True
    return DerivativeChain(times=np.asarray(times, dtype=float),
                           values=[out], boundary=boundary)
