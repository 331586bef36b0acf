"""Pure-numpy implementations of the time-stepping kernels.

Same algorithms and signatures as the compiled ``_kernels`` module; used
when the extension is not built.
"""
import numpy as np


def solve_volterra(weights, end_weights, omega0, dt):
    """Implicit trapezoidal stepping of u' = -i w0 u - M_n, u(0) = 1.

    The memory integral at step n is
    M_n = w[0] u[n] + sum_{j=1}^{n-1} w[n-j] u[j] + e[n] u[0]
    with ``weights`` w and ``end_weights`` e.  It is linear in the new
    value, so the trapezoidal corrector is solved exactly.
    """
    w = np.asarray(weights, dtype=complex)
    e = np.asarray(end_weights, dtype=complex)
    n = w.size
    u = np.empty(n, dtype=complex)
    u[0] = 1.0
    if n == 1:
        return u
    half = 0.5 * dt
    f_prev = -1j * omega0 * u[0]
    denom = 1.0 + half * (1j * omega0 + w[0])
    for m in range(1, n):
        # History without the unknown u[m] term.
        hist = e[m] * u[0]
        if m > 1:
            hist += np.dot(w[m - 1:0:-1], u[1:m])
        u[m] = (u[m - 1] + half * f_prev - half * hist) / denom
        f_prev = -1j * omega0 * u[m] - (hist + w[0] * u[m])
    return u


def v_diagonal(u, gt, dt):
    """Equal-time correlation v(t_i, t_i) for every grid point.

    Double trapezoidal sum of u(s1) gt(s2 - s1) conj(u(s2)) over [0, t_i]^2,
    grown one L-shaped strip per step.  ``gt[k]`` holds the kernel at lag
    k dt for k >= 0; negative lags are conjugates.
    """
    u = np.asarray(u, dtype=complex)
    gt = np.asarray(gt, dtype=complex)
    n = u.size
    out = np.zeros(n)
    wu = u.copy()
    wu[0] *= 0.5
    acc = 0.0
    for i in range(n):
        if i > 0:
            r = np.conj(u[i]) * np.dot(wu[:i], gt[i:0:-1])
            m_ii = (abs(u[i]) ** 2) * gt[0].real
            out[i] = dt * dt * (acc + r.real + 0.25 * m_ii)
            acc += 2.0 * r.real + m_ii
        else:
            acc += 0.25 * (abs(u[0]) ** 2) * gt[0].real
    return out


def v_row(u, gt, i, j_max, dt):
    """Two-time correlation v(t_i, t_j) for j = 0 .. j_max.

    First the inner sum h_k = dt sum_a w_a u(t_i - t_a) gt(t_a - t_k), then
    the outer trapezoid dt sum_k w_k h_k conj(u(t_j - t_k)).  ``gt`` must
    cover lags 0 .. max(i, j_max).
    """
    u = np.asarray(u, dtype=complex)
    gt = np.asarray(gt, dtype=complex)
    row = np.zeros(j_max + 1, dtype=complex)
    if i == 0 or j_max == 0:
        return row
    x = u[: i + 1].copy()
    x[0] *= 0.5
    x[i] *= 0.5
    # Kernel on lags -j_max .. i, index m <-> lag m - j_max.
    lags = np.concatenate([np.conj(gt[j_max:0:-1]), gt[: i + 1]])
    full = np.convolve(x, lags)
    h = dt * full[i + j_max::-1][: j_max + 1]
    conv = np.convolve(h, np.conj(u[: j_max + 1]))[: j_max + 1]
    ucj = np.conj(u[: j_max + 1])
    row[1:] = dt * (conv[1:] - 0.5 * h[0] * ucj[1:] - 0.5 * h[1:] * ucj[0])
    return row
