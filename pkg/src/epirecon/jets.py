"""Exact arithmetic on truncated derivative sequences ("jets").

A jet stores the raw time derivatives of a signal at a point (or along a
whole grid): ``a[k]`` is the k-th derivative value. Products and quotients
follow the Leibniz rule with exact binomial coefficients, so composite
expressions of output derivatives (y*ydot, ydot^2/y, ...) get their time
derivatives in closed form, with no symbolic engine and no interpolation.

All functions accept arrays of shape ``(depth, ...)`` and operate
elementwise over the trailing axes.
"""

import numpy as np

_BINOM = np.array([[1, 0, 0, 0, 0, 0, 0, 0],
                   [1, 1, 0, 0, 0, 0, 0, 0],
                   [1, 2, 1, 0, 0, 0, 0, 0],
                   [1, 3, 3, 1, 0, 0, 0, 0],
                   [1, 4, 6, 4, 1, 0, 0, 0],
                   [1, 5, 10, 10, 5, 1, 0, 0],
                   [1, 6, 15, 20, 15, 6, 1, 0],
                   [1, 7, 21, 35, 35, 21, 7, 1]], dtype=float)


def jmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Leibniz product: derivatives of a*b up to min depth of the factors."""
    depth = min(a.shape[0], b.shape[0])
    out = np.zeros((depth,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
    for k in range(depth):
        for i in range(k + 1):
            out[k] += _BINOM[k, i] * a[i] * b[k - i]
    return out


def jdiv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Derivatives of a/b via the triangular Leibniz recurrence.

    Caller guarantees b[0] is bounded away from zero.
    """
    depth = min(a.shape[0], b.shape[0])
    out = np.zeros((depth,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
    for k in range(depth):
        acc = np.zeros(out.shape[1:])
        for i in range(k):
            acc += _BINOM[k, i] * out[i] * b[k - i]
        out[k] = (a[k] - acc) / b[0]
    return out


def jshift(a: np.ndarray, n: int = 1) -> np.ndarray:
    """Jet of the n-th derivative of the underlying signal."""
    return a[n:]


def jconst(value: float, depth: int, like: np.ndarray | None = None) -> np.ndarray:
    """Jet of a constant (all derivatives zero)."""
    shape = (depth,) + (like.shape[1:] if like is not None else ())
    out = np.zeros(shape)
    out[0] = value
    return out
