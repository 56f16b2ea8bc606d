"""Pure-Python (numpy) implementations of the hot kernels.

These are the reference versions; :mod:`deformed_boson._kernels` mirrors
them in Cython.  Both must agree to rounding.
"""
import math

import numpy as np


def ladder_products(sqrt_F):
    """Table ``R[a, i] = sqrt(F(i+1)) ... sqrt(F(i+a))`` for ``a + i <= D``.

    Entries with ``a + i > D`` are NaN.
    """
    s = np.asarray(sqrt_F, dtype=np.float64)
    D = s.shape[0] - 1
    R = np.full((D + 1, D + 1), np.nan)
    R[0, :] = 1.0
    for a in range(1, D + 1):
        for i in range(0, D + 1 - a):
            R[a, i] = R[a - 1, i] * s[i + a]
    return R


def sigma_inverse_table(sqrt_F):
    """Coefficients ``D(n, m, k)`` of the inverse basis change.

    ``D(n,m,0) = 1 / C(n,m,0)`` and
    ``D(n,m,k) = -C(n+k,m+k,0)**-1 * sum_{i<k} C(n+i,m+i,k-i) D(n,m,i)``
    with ``C(n,m,i) = R[n,i] R[m,i]``.  Returns an array of shape
    ``(D, D, D)``; entries with ``n+k >= D`` or ``m+k >= D`` are NaN.
    """
    R = ladder_products(sqrt_F)
    D = R.shape[0] - 1
    out = np.full((D, D, D), np.nan)
    for n in range(D):
        for m in range(D):
            kmax = D - max(n, m)
            col = np.empty(kmax)
            col[0] = 1.0 / (R[n, 0] * R[m, 0])
            for k in range(1, kmax):
                i = np.arange(k)
                c = R[n + i, k - i] * R[m + i, k - i]
                col[k] = -np.dot(c, col[:k]) / (R[n + k, 0] * R[m + k, 0])
            out[n, m, :kmax] = col
    return out


def _genlaguerre(k, alpha, x):
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + alpha - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur


def omega_field(n, m, q, p, hbar):
    """Samples of the left-right eigenstate ``Omega_nm`` on the grid ``q x p``.

    Row ``i`` holds ``q[i]``, column ``j`` holds ``p[j]``.
    """
    q = np.asarray(q, dtype=np.float64)[:, None]
    p = np.asarray(p, dtype=np.float64)[None, :]
    swap = n < m
    if swap:
        n, m = m, n
    d = n - m
    r2 = (q * q + p * p) / hbar
    pref = 2.0 * (-1) ** m * math.exp(0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1)))
    z = math.sqrt(2.0 / hbar) * (q - 1j * p)
    out = pref * z**d * np.exp(-r2) * _genlaguerre(m, d, 2.0 * r2)
    return np.conj(out) if swap else out


def trapz_inner(x, y, h):
    """Trapezoidal approximation of ``sum conj(x) * y * h**2`` on a square grid."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    w0 = np.ones(x.shape[0])
    w0[0] = w0[-1] = 0.5
    w1 = np.ones(x.shape[1])
    w1[0] = w1[-1] = 0.5
    rows = np.sum(np.conj(x) * y * w1[None, :], axis=1)
    return complex(np.sum(rows * w0) * h * h)
