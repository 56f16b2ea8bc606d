# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in :mod:`deformed_boson._kernels_py`."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, lgamma, NAN

cnp.import_array()


def ladder_products(sqrt_F):
    cdef double[::1] s = np.ascontiguousarray(sqrt_F, dtype=np.float64)
    cdef Py_ssize_t D = s.shape[0] - 1
    R_arr = np.full((D + 1, D + 1), np.nan)
    cdef double[:, ::1] R = R_arr
    cdef Py_ssize_t a, i
    for i in range(D + 1):
        R[0, i] = 1.0
    for a in range(1, D + 1):
        for i in range(0, D + 1 - a):
            R[a, i] = R[a - 1, i] * s[i + a]
    return R_arr


def sigma_inverse_table(sqrt_F):
    R_arr = ladder_products(sqrt_F)
    cdef double[:, ::1] R = R_arr
    cdef Py_ssize_t D = R.shape[0] - 1
    out_arr = np.full((D, D, D), np.nan)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t n, m, k, i, kmax
    cdef double acc
    for n in range(D):
        for m in range(D):
            kmax = D - (n if n > m else m)
            out[n, m, 0] = 1.0 / (R[n, 0] * R[m, 0])
            for k in range(1, kmax):
                acc = 0.0
                for i in range(k):
                    acc = acc + R[n + i, k - i] * R[m + i, k - i] * out[n, m, i]
                out[n, m, k] = -acc / (R[n + k, 0] * R[m + k, 0])
    return out_arr


def omega_field(int n, int m, q, p, double hbar):
    cdef double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t nq = qv.shape[0], np_ = pv.shape[0]
    out_arr = np.empty((nq, np_), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef bint swap = n < m
    cdef int t
    if swap:
        t = n
        n = m
        m = t
    cdef int d = n - m
    cdef double sign = -1.0 if (m % 2) else 1.0
    cdef double pref = 2.0 * sign * exp(0.5 * (lgamma(m + 1.0) - lgamma(n + 1.0)))
    cdef double scale = sqrt(2.0 / hbar)
    cdef Py_ssize_t i, j
    cdef int k
    cdef double r2, x, lp, lc, ln, zr, zi, wr, wi, tr, g
    cdef double complex val
    for i in range(nq):
        for j in range(np_):
            r2 = (qv[i] * qv[i] + pv[j] * pv[j]) / hbar
            x = 2.0 * r2
            lp = 1.0
            if m == 0:
                lc = 1.0
            else:
                lc = 1.0 + d - x
                for k in range(1, m):
                    ln = ((2 * k + 1 + d - x) * lc - (k + d) * lp) / (k + 1)
                    lp = lc
                    lc = ln
            zr = scale * qv[i]
            zi = -scale * pv[j]
            wr = 1.0
            wi = 0.0
            for k in range(d):
                tr = wr * zr - wi * zi
                wi = wr * zi + wi * zr
                wr = tr
            g = pref * exp(-r2) * lc
            if swap:
                val = g * wr - 1j * (g * wi)
            else:
                val = g * wr + 1j * (g * wi)
            out[i, j] = val
    return out_arr


def trapz_inner(x, y, double h):
    cdef double complex[:, ::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef double complex[:, ::1] yv = np.ascontiguousarray(y, dtype=np.complex128)
    cdef Py_ssize_t n0 = xv.shape[0], n1 = xv.shape[1]
    cdef Py_ssize_t i, j
    cdef double w, rr, ri, tr, ti, ar, ai, br, bi
    tr = 0.0
    ti = 0.0
    for i in range(n0):
        rr = 0.0
        ri = 0.0
        for j in range(n1):
            w = 0.5 if (j == 0 or j == n1 - 1) else 1.0
            ar = xv[i, j].real
            ai = xv[i, j].imag
            br = yv[i, j].real
            bi = yv[i, j].imag
            rr = rr + w * (ar * br + ai * bi)
            ri = ri + w * (ar * bi - ai * br)
        w = 0.5 if (i == 0 or i == n0 - 1) else 1.0
        tr = tr + w * rr
        ti = ti + w * ri
    return complex(tr * h * h, ti * h * h)
