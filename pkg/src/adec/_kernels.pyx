# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_fallback.py`` for the reference."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, sqrt, hypot, fabs

cnp.import_array()


def greedy_sd_real(y, int r, double delta, long L):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yy = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = yy.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] levels = np.empty(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] coef = np.empty(max(r, 1), dtype=np.float64)
    cdef Py_ssize_t n, l, lmax
    cdef double w, v, hi = L * delta
    cdef long j
    cdef bint overloaded = False
    cdef double c = 1.0
    # (-1)^(l+1) * C(r, l) built incrementally
    for l in range(1, r + 1):
        c = c * (r - l + 1) / l
        coef[l - 1] = c if (l % 2 == 1) else -c
    for n in range(m):
        w = 0.0
        lmax = r if r < n else n
        for l in range(1, lmax + 1):
            w += coef[l - 1] * u[n - l]
        v = w + yy[n]
        if v > hi or v < -hi:
            overloaded = True
        j = <long>floor(v / delta)
        if j > L - 1:
            j = L - 1
        elif j < -L:
            j = -L
        levels[n] = j
        u[n] = v - (2 * j + 1) * delta / 2
    return levels, u, bool(overloaded)


def jacobi_eigh(a, int max_sweeps, double tol):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.array(a, dtype=np.complex128, copy=True, order="C")
    cdef Py_ssize_t k = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = np.eye(k, dtype=np.complex128)
    cdef Py_ssize_t p, q, i, sweep
    cdef double scale = 0.0, off, b, app, aqq, theta, t, c, s
    cdef double complex apq, e, ec, gqp, gqq, xp, xq
    for p in range(k):
        for q in range(k):
            scale += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
    scale = sqrt(scale)
    if k < 2 or scale == 0.0:
        return np.real(np.diag(A)).copy(), V, 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(k):
            for q in range(k):
                if p != q:
                    off += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
        if sqrt(off) <= tol * scale:
            return np.real(np.diag(A)).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p, q]
                b = hypot(apq.real, apq.imag)
                if b == 0.0:
                    continue
                e = apq / b
                ec = e.conjugate()
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * b)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                gqp = -s * ec
                gqq = c * ec
                for i in range(k):
                    xp = A[i, p]
                    xq = A[i, q]
                    A[i, p] = xp * c + xq * gqp
                    A[i, q] = xp * s + xq * gqq
                for i in range(k):
                    xp = A[p, i]
                    xq = A[q, i]
                    A[p, i] = xp * c - xq * (s * e)
                    A[q, i] = xp * s + xq * (c * e)
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * b
                A[q, q] = aqq + t * b
                for i in range(k):
                    xp = V[i, p]
                    xq = V[i, q]
                    V[i, p] = xp * c + xq * gqp
                    V[i, q] = xp * s + xq * gqq
    return np.real(np.diag(A)).copy(), V, -1
