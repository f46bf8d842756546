"""Compiled inner loops for the small dense eigenvalue and determinant routines.

Everything here operates on contiguous complex128 arrays and is written so that
it also runs (slowly) as plain Python when numba is disabled with
``NUMBA_DISABLE_JIT=1``.
"""

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps


@njit(cache=True)
def hessenberg_inplace(h):
    """Reduce ``h`` to upper Hessenberg form by Householder similarity."""
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        xnorm = np.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
        if xnorm == 0.0:
            continue
        x0 = x[0]
        if abs(x0) == 0.0:
            phase = 1.0 + 0.0j
        else:
            phase = x0 / abs(x0)
        alpha = -phase * xnorm
        v = x
        v[0] = v[0] - alpha
        vnorm = np.sqrt(np.sum(v.real ** 2 + v.imag ** 2))
        if vnorm == 0.0:
            continue
        v = v / vnorm
        # left: (I - 2 v v^H) h[k+1:, :]
        for j in range(n):
            s = 0.0j
            for i in range(n - k - 1):
                s += np.conj(v[i]) * h[k + 1 + i, j]
            for i in range(n - k - 1):
                h[k + 1 + i, j] -= 2.0 * v[i] * s
        # right: h[:, k+1:] (I - 2 v v^H)
        for i in range(n):
            s = 0.0j
            for j in range(n - k - 1):
                s += h[i, k + 1 + j] * v[j]
            for j in range(n - k - 1):
                h[i, k + 1 + j] -= 2.0 * s * np.conj(v[j])
        for i in range(k + 2, n):
            h[i, k] = 0.0j


@njit(cache=True)
def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    m1 = 0.5 * (a + d) + disc
    m2 = 0.5 * (a + d) - disc
    if abs(m1 - d) <= abs(m2 - d):
        return m1
    return m2


@njit(cache=True)
def hessenberg_qr_eigvals(h, max_iter):
    """Eigenvalues of an upper Hessenberg matrix by single-shift complex QR.

    Returns ``(eigvals, iterations, converged)``. ``h`` is overwritten.
    """
    n = h.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    hnorm = np.sqrt(np.sum(h.real ** 2 + h.imag ** 2))
    floor = EPS * hnorm
    cs = np.zeros(n, dtype=np.complex128)
    ss = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    total = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            out[0] = h[0, 0]
            break
        # locate the start of the active unreduced block
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            scale = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if sub <= EPS * scale or sub <= floor:
                h[lo, lo - 1] = 0.0j
                break
            lo -= 1
        if lo == hi:
            out[hi] = h[hi, hi]
            hi -= 1
            since_deflation = 0
            continue
        if total >= max_iter:
            return out, total, False
        total += 1
        since_deflation += 1

        if since_deflation % 11 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi],
                                  h[hi, hi - 1], h[hi, hi])

        for k in range(lo, hi + 1):
            h[k, k] -= mu
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            r = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
            if r == 0.0:
                c = 1.0 + 0.0j
                s = 0.0j
            else:
                c = x / r
                s = y / r
            cs[k] = c
            ss[k] = s
            for j in range(k, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = np.conj(c) * t1 + np.conj(s) * t2
                h[k + 1, j] = -s * t1 + c * t2
        for k in range(lo, hi):
            c = cs[k]
            s = ss[k]
            top = k + 2 if k + 2 <= hi else hi
            for i in range(lo, top + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = t1 * c + t2 * s
                h[i, k + 1] = -t1 * np.conj(s) + t2 * np.conj(c)
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return out, total, True


@njit(cache=True)
def lu_det(a):
    """Determinant by LU factorization with partial pivoting (``a`` is overwritten)."""
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            if abs(a[i, k]) > best:
                best = abs(a[i, k])
                p = i
        if best == 0.0:
            return 0.0j
        if p != k:
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = t
            det = -det
        piv = a[k, k]
        det *= piv
        for i in range(k + 1, n):
            f = a[i, k] / piv
            for j in range(k + 1, n):
                a[i, j] -= f * a[k, j]
    return det
