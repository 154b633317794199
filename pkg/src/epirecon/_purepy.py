"""Pure-Python RK4 kernels, the fallback twin of the compiled core.

Each stepper is unrolled on scalars with the same operation order as its
compiled counterpart in ``_core.pyx`` so both backends agree to the last
few ulps. Scalar arithmetic beats numpy vectors at these dimensions.
"""

import numpy as np

backend_name = "pure-python"


def _rk4_sirs(theta, x0, h, n, out):
    beta, gamma, mu = theta[1], theta[2], theta[3]
    s = x0[0]
    i = x0[1]
    out[0, 0] = s
    out[0, 1] = i
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = -beta * s * i + mu * (1.0 - s - i)
        k1i = beta * s * i - gamma * i
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        k2s = -beta * sa * ia + mu * (1.0 - sa - ia)
        k2i = beta * sa * ia - gamma * ia
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        k3s = -beta * sb * ib + mu * (1.0 - sb - ib)
        k3i = beta * sb * ib - gamma * ib
        sc = s + h * k3s
        ic = i + h * k3i
        k4s = -beta * sc * ic + mu * (1.0 - sc - ic)
        k4i = beta * sc * ic - gamma * ic
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        out[step + 1, 0] = s
        out[step + 1, 1] = i


def _rk4_sir(theta, x0, h, n, out):
    beta, gamma = theta[1], theta[2]
    s = x0[0]
    i = x0[1]
    out[0, 0] = s
    out[0, 1] = i
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = -beta * s * i
        k1i = beta * s * i - gamma * i
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        k2s = -beta * sa * ia
        k2i = beta * sa * ia - gamma * ia
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        k3s = -beta * sb * ib
        k3i = beta * sb * ib - gamma * ib
        sc = s + h * k3s
        ic = i + h * k3i
        k4s = -beta * sc * ic
        k4i = beta * sc * ic - gamma * ic
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        out[step + 1, 0] = s
        out[step + 1, 1] = i


def _rk4_sir_demog(theta, x0, h, n, out):
    beta, gamma, delta = theta[1], theta[2], theta[3]
    gd = gamma + delta
    s = x0[0]
    i = x0[1]
    out[0, 0] = s
    out[0, 1] = i
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = delta - beta * s * i - delta * s
        k1i = beta * s * i - gd * i
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        k2s = delta - beta * sa * ia - delta * sa
        k2i = beta * sa * ia - gd * ia
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        k3s = delta - beta * sb * ib - delta * sb
        k3i = beta * sb * ib - gd * ib
        sc = s + h * k3s
        ic = i + h * k3i
        k4s = delta - beta * sc * ic - delta * sc
        k4i = beta * sc * ic - gd * ic
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        out[step + 1, 0] = s
        out[step + 1, 1] = i


def _rk4_sirv(theta, x0, h, n, out):
    beta, gamma, nu = theta[0], theta[1], theta[2]
    s = x0[0]
    i = x0[1]
    v = x0[2]
    out[0, 0] = s
    out[0, 1] = i
    out[0, 2] = v
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = -beta * s * i - nu * s
        k1i = beta * s * i - gamma * i
        k1v = nu * s
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        k2s = -beta * sa * ia - nu * sa
        k2i = beta * sa * ia - gamma * ia
        k2v = nu * sa
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        k3s = -beta * sb * ib - nu * sb
        k3i = beta * sb * ib - gamma * ib
        k3v = nu * sb
        sc = s + h * k3s
        ic = i + h * k3i
        k4s = -beta * sc * ic - nu * sc
        k4i = beta * sc * ic - gamma * ic
        k4v = nu * sc
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        v = v + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        out[step + 1, 0] = s
        out[step + 1, 1] = i
        out[step + 1, 2] = v


def _rk4_sir_incidence(theta, x0, h, n, out):
    beta, gamma = theta[0], theta[1]
    s = x0[0]
    i = x0[1]
    out[0, 0] = s
    out[0, 1] = i
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = -beta * s * i
        k1i = beta * s * i - gamma * i
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        k2s = -beta * sa * ia
        k2i = beta * sa * ia - gamma * ia
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        k3s = -beta * sb * ib
        k3i = beta * sb * ib - gamma * ib
        sc = s + h * k3s
        ic = i + h * k3i
        k4s = -beta * sc * ic
        k4i = beta * sc * ic - gamma * ic
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        out[step + 1, 0] = s
        out[step + 1, 1] = i


def _rk4_siv(theta, x0, h, n, out):
    a, beta, delta, nu = theta[0], theta[1], theta[2], theta[3]
    nd = nu + delta
    s = x0[0]
    i = x0[1]
    v = x0[2]
    out[0, 0] = s
    out[0, 1] = i
    out[0, 2] = v
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1s = a - beta * s * i - nd * s
        k1i = beta * s * i - delta * i
        k1v = nu * s - delta * v
        sa = s + h2 * k1s
        ia = i + h2 * k1i
        va = v + h2 * k1v
        k2s = a - beta * sa * ia - nd * sa
        k2i = beta * sa * ia - delta * ia
        k2v = nu * sa - delta * va
        sb = s + h2 * k2s
        ib = i + h2 * k2i
        vb = v + h2 * k2v
        k3s = a - beta * sb * ib - nd * sb
        k3i = beta * sb * ib - delta * ib
        k3v = nu * sb - delta * vb
        sc = s + h * k3s
        ic = i + h * k3i
        vc = v + h * k3v
        k4s = a - beta * sc * ic - nd * sc
        k4i = beta * sc * ic - delta * ic
        k4v = nu * sc - delta * vc
        s = s + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + h6 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        v = v + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        out[step + 1, 0] = s
        out[step + 1, 1] = i
        out[step + 1, 2] = v


def _rk4_sir_xy(theta, x0, h, n, out):
    """Rescaled SIR coordinates (X, Y) = (beta*S, k*I)."""
    c, gamma = theta[0], theta[1]
    x = x0[0]
    y = x0[1]
    out[0, 0] = x
    out[0, 1] = y
    h2 = 0.5 * h
    h6 = h / 6.0
    for step in range(n):
        k1x = -c * x * y
        k1y = y * (x - gamma)
        xa = x + h2 * k1x
        ya = y + h2 * k1y
        k2x = -c * xa * ya
        k2y = ya * (xa - gamma)
        xb = x + h2 * k2x
        yb = y + h2 * k2y
        k3x = -c * xb * yb
        k3y = yb * (xb - gamma)
        xc = x + h * k3x
        yc = y + h * k3y
        k4x = -c * xc * yc
        k4y = yc * (xc - gamma)
        x = x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        out[step + 1, 0] = x
        out[step + 1, 1] = y


_STEPPERS = {
    0: (_rk4_sirs, 2),
    1: (_rk4_sir, 2),
    2: (_rk4_sir_demog, 2),
    3: (_rk4_sirv, 3),
    4: (_rk4_sir_incidence, 2),
    5: (_rk4_siv, 3),
    6: (_rk4_sir_xy, 2),
}


def integrate_grid(kernel_id, theta, x0, h, n_steps):
    """Classical RK4 over ``n_steps`` fixed steps; returns (n_steps+1, dim) states.

    Negative ``h`` integrates the time-reversed field.
    """
    stepper, dim = _STEPPERS[kernel_id]
    out = np.empty((n_steps + 1, dim))
    stepper([float(v) for v in theta], [float(v) for v in x0], float(h),
            int(n_steps), out)
    return out
