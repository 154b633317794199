# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 kernels. Operation order mirrors ``_purepy`` exactly."""

import numpy as np

backend_name = "compiled"


cdef void _rk4_sirs(double beta, double gamma, double mu,
                    double s, double i, double h, Py_ssize_t n,
                    double[:, ::1] out) noexcept nogil:
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1s, k1i, k2s, k2i, k3s, k3i, k4s, k4i
    cdef double sa, ia, sb, ib, sc, ic
    cdef Py_ssize_t step
    out[0, 0] = s
    out[0, 1] = i
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


cdef void _rk4_sir(double beta, double gamma,
                   double s, double i, double h, Py_ssize_t n,
                   double[:, ::1] out) noexcept nogil:
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1s, k1i, k2s, k2i, k3s, k3i, k4s, k4i
    cdef double sa, ia, sb, ib, sc, ic
    cdef Py_ssize_t step
    out[0, 0] = s
    out[0, 1] = i
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


cdef void _rk4_sir_demog(double beta, double gamma, double delta,
                         double s, double i, double h, Py_ssize_t n,
                         double[:, ::1] out) noexcept nogil:
    cdef double gd = gamma + delta
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1s, k1i, k2s, k2i, k3s, k3i, k4s, k4i
    cdef double sa, ia, sb, ib, sc, ic
    cdef Py_ssize_t step
    out[0, 0] = s
    out[0, 1] = i
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


cdef void _rk4_sirv(double beta, double gamma, double nu,
                    double s, double i, double v, double h, Py_ssize_t n,
                    double[:, ::1] out) noexcept nogil:
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1s, k1i, k1v, k2s, k2i, k2v, k3s, k3i, k3v, k4s, k4i, k4v
    cdef double sa, ia, sb, ib, sc, ic
    cdef Py_ssize_t step
    out[0, 0] = s
    out[0, 1] = i
    out[0, 2] = v
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


cdef void _rk4_siv(double a, double beta, double delta, double nu,
                   double s, double i, double v, double h, Py_ssize_t n,
                   double[:, ::1] out) noexcept nogil:
    cdef double nd = nu + delta
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1s, k1i, k1v, k2s, k2i, k2v, k3s, k3i, k3v, k4s, k4i, k4v
    cdef double sa, ia, va, sb, ib, vb, sc, ic, vc
    cdef Py_ssize_t step
    out[0, 0] = s
    out[0, 1] = i
    out[0, 2] = v
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


cdef void _rk4_sir_xy(double c, double gamma,
                      double x, double y, double h, Py_ssize_t n,
                      double[:, ::1] out) noexcept nogil:
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y
    cdef double xa, ya, xb, yb, xc, yc
    cdef Py_ssize_t step
    out[0, 0] = x
    out[0, 1] = y
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


def integrate_grid(int kernel_id, theta, x0, double h, Py_ssize_t n_steps):
    """Classical RK4 over ``n_steps`` fixed steps; returns (n_steps+1, dim) states.

    Negative ``h`` integrates the time-reversed field.
    """
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef double[::1] x = np.ascontiguousarray(x0, dtype=np.float64)
    cdef int dim = 3 if kernel_id in (3, 5) else 2
    out_arr = np.empty((n_steps + 1, dim))
    cdef double[:, ::1] out = out_arr
    if kernel_id == 0:
        _rk4_sirs(th[1], th[2], th[3], x[0], x[1], h, n_steps, out)
    elif kernel_id == 1:
        _rk4_sir(th[1], th[2], x[0], x[1], h, n_steps, out)
    elif kernel_id == 2:
        _rk4_sir_demog(th[1], th[2], th[3], x[0], x[1], h, n_steps, out)
    elif kernel_id == 3:
        _rk4_sirv(th[0], th[1], th[2], x[0], x[1], x[2], h, n_steps, out)
    elif kernel_id == 4:
        # incidence-output SIR: same dynamics, (beta, gamma) lead the vector
        _rk4_sir(th[0], th[1], x[0], x[1], h, n_steps, out)
    elif kernel_id == 5:
        _rk4_siv(th[0], th[1], th[2], th[3], x[0], x[1], x[2], h, n_steps, out)
    elif kernel_id == 6:
        _rk4_sir_xy(th[0], th[1], x[0], x[1], h, n_steps, out)
    else:
        raise KeyError(kernel_id)
    return out_arr
