# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping kernels.

Same algorithms as ``_kernels_py``.  The O(N) inner sums are unit-stride
BLAS dot products (scipy's bundled BLAS) against reversed copies of the
arrays, called with the GIL released.  Each sum has a fixed length and
order, so results do not depend on how callers schedule rows across
threads.
"""
import numpy as np
cimport numpy as cnp
from scipy.linalg.cython_blas cimport zdotc, zdotu

cnp.import_array()

ctypedef double complex cplx


cdef inline double abs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline cplx conj(cplx z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline cplx dotu(const cplx* x, const cplx* y, Py_ssize_t n) noexcept nogil:
    """sum_b x[b] y[b]."""
    cdef int one = 1
    cdef int m = <int>n
    if m <= 0:
        return 0.0
    return zdotu(&m, <cplx*>x, &one, <cplx*>y, &one)


cdef inline cplx dotc(const cplx* x, const cplx* y, Py_ssize_t n) noexcept nogil:
    """sum_b conj(x[b]) y[b]."""
    cdef int one = 1
    cdef int m = <int>n
    if m <= 0:
        return 0.0
    return zdotc(&m, <cplx*>x, &one, <cplx*>y, &one)


def solve_volterra(weights, end_weights, double omega0, double dt):
    cdef const cplx[::1] w = np.ascontiguousarray(weights, dtype=complex)
    cdef const cplx[::1] e = np.ascontiguousarray(end_weights, dtype=complex)
    cdef Py_ssize_t n = w.shape[0]
    out = np.empty(n, dtype=complex)
    cdef cplx[::1] u = out
    # wr[c] = w[n - 1 - c], so w[m - j] = wr[n - 1 - m + j].
    cdef const cplx[::1] wr = np.ascontiguousarray(np.asarray(w)[::-1])
    cdef Py_ssize_t m
    cdef double half = 0.5 * dt
    cdef cplx f_prev, denom, hist
    u[0] = 1.0
    if n == 1:
        return out
    with nogil:
        f_prev = -1j * omega0 * u[0]
        denom = 1.0 + half * (1j * omega0 + w[0])
        for m in range(1, n):
            # sum_{j=1}^{m-1} w[m-j] u[j]
            hist = e[m] * u[0] + dotu(&wr[n - m], &u[1], m - 1)
            u[m] = (u[m - 1] + half * f_prev - half * hist) / denom
            f_prev = -1j * omega0 * u[m] - (hist + w[0] * u[m])
    return out


def v_diagonal(u_in, gt_in, double dt):
    cdef const cplx[::1] u = np.ascontiguousarray(u_in, dtype=complex)
    cdef Py_ssize_t n = u.shape[0]
    cdef const cplx[::1] gt = np.ascontiguousarray(np.asarray(gt_in)[:n], dtype=complex)
    # gr[c] = gt[n - 1 - c], so gt[i - a] = gr[n - 1 - i + a].
    cdef const cplx[::1] gr = np.ascontiguousarray(np.asarray(gt)[::-1])
    out = np.zeros(n)
    cdef double[::1] v = out
    cdef Py_ssize_t i
    cdef cplx s
    cdef double acc, m_ii, rr
    with nogil:
        acc = 0.25 * abs2(u[0]) * gt[0].real
        for i in range(1, n):
            # 0.5 u[0] gt[i] + sum_{a=1}^{i-1} u[a] gt[i-a]
            s = 0.5 * u[0] * gt[i] + dotu(&gr[n - i], &u[1], i - 1)
            rr = (conj(u[i]) * s).real
            m_ii = abs2(u[i]) * gt[0].real
            v[i] = dt * dt * (acc + rr + 0.25 * m_ii)
            acc = acc + 2.0 * rr + m_ii
    return out


def v_row(u_in, gt_in, Py_ssize_t i, Py_ssize_t j_max, double dt):
    cdef const cplx[::1] u = np.ascontiguousarray(u_in, dtype=complex)
    cdef const cplx[::1] gt = np.ascontiguousarray(gt_in, dtype=complex)
    out = np.zeros(j_max + 1, dtype=complex)
    if i == 0 or j_max == 0:
        return out
    cdef cplx[::1] row = out
    h_arr = np.empty(j_max + 1, dtype=complex)
    cdef cplx[::1] h = h_arr
    uarr = np.asarray(u)
    # gc[c] = conj(gt[c]); ui[c] = u[i - c]; uj[c] = u[j_max - c].
    cdef const cplx[::1] gc = np.conj(np.asarray(gt)[: j_max + 1])
    cdef const cplx[::1] ui = np.ascontiguousarray(uarr[i::-1])
    cdef const cplx[::1] uj = np.ascontiguousarray(uarr[j_max::-1])
    cdef Py_ssize_t k, top
    cdef cplx s
    with nogil:
        for k in range(j_max + 1):
            # h_k / dt = sum_{a=0}^{i} c_a u[i-a] g(a-k), g(-l) = conj(gt[l]).
            # a < k: sum_a gc[k-a] u[i-a], both indices fall together.
            # a >= k: sum_b gt[b] u[i-k-b] = sum_b gt[b] ui[k+b].
            top = k if k <= i + 1 else i + 1
            s = 0.0
            if top > 0:
                s = dotu(&gc[k - top + 1], &u[i - top + 1], top)
            if k <= i:
                s = s + dotu(&gt[0], &ui[k], i - k + 1)
            h[k] = dt * (s - 0.5 * _lagged(u[i], gt, k) - 0.5 * _lagged(u[0], gt, k - i))
        for k in range(1, j_max + 1):
            # sum_{a=0}^{k} conj(u[k-a]) h[a], minus the trapezoid end halves
            s = dotc(&uj[j_max - k], &h[0], k + 1)
            row[k] = dt * (s - 0.5 * h[0] * conj(u[k]) - 0.5 * h[k] * conj(u[0]))
    return out


cdef inline cplx _lagged(cplx x, const cplx[::1] gt, Py_ssize_t minus_lag) noexcept nogil:
    """x times the kernel at lag -minus_lag."""
    if minus_lag >= 0:
        return x * conj(gt[minus_lag])
    return x * gt[-minus_lag]
