"""Backend selection for the RK4 kernels.

Prefers the compiled extension, falls back to the pure-Python twin when the
extension is missing. ``EPIRECON_PURE_PYTHON=1`` forces the fallback (used by
the benchmark and the backend-agreement tests).
"""

import os

import numpy as np

if os.environ.get("EPIRECON_PURE_PYTHON"):
    from . import _purepy as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _purepy as _impl

BACKEND = _impl.backend_name

# kernel ids shared by both backends
K_SIRS = 0
K_SIR = 1
K_SIR_DEMOG = 2
K_SIRV = 3
K_SIR_INCIDENCE = 4
K_SIV = 5
K_SIR_XY = 6


def integrate_grid(kernel_id: int, theta, x0, h: float, n_steps: int) -> np.ndarray:
    """Run the fixed-step RK4 kernel; returns states of shape (n_steps+1, dim)."""
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    return _impl.integrate_grid(kernel_id, theta, x0, float(h), int(n_steps))
