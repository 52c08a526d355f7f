"""Pure-Python/numpy versions of the hot kernels.

These mirror ``_kernels.pyx`` exactly and are used whenever the compiled
extension is unavailable (or ``ADEC_PURE_PYTHON=1`` is set).
"""
from __future__ import annotations

from math import comb, floor, hypot, sqrt

import numpy as np


def greedy_sd_real(y, r, delta, L):
    """Greedy r-th order sigma-delta on one real channel.

    Returns ``(levels, u, overloaded)`` where ``q_n = (2*levels[n] + 1) * delta / 2``.
    """
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = y.shape[0]
    coef = [(-1) ** (l + 1) * comb(r, l) for l in range(1, r + 1)]
    levels = np.empty(m, dtype=np.int64)
    u = np.zeros(m, dtype=np.float64)
    hi = L * delta
    overloaded = False
    uu = [0.0] * m
    for n in range(m):
        w = 0.0
        for l in range(1, min(r, n) + 1):
            w += coef[l - 1] * uu[n - l]
        v = w + y[n]
        if v > hi or v < -hi:
            overloaded = True
        j = floor(v / delta)
        if j > L - 1:
            j = L - 1
        elif j < -L:
            j = -L
        levels[n] = j
        uu[n] = v - (2 * j + 1) * delta / 2
    u[:] = uu
    return levels, u, overloaded


def jacobi_eigh(a, max_sweeps, tol):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Works on a copy. Returns ``(diag, V, sweeps)`` with ``V^* a V = diag(diag)``;
    ``sweeps == -1`` signals that the sweep budget ran out.
    """
    A = np.array(a, dtype=np.complex128, copy=True)
    k = A.shape[0]
    V = np.eye(k, dtype=np.complex128)
    scale = np.linalg.norm(A)
    if k < 2 or scale == 0.0:
        return A.diagonal().real.copy(), V, 0
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= tol * scale:
            return A.diagonal().real.copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p, q]
                b = hypot(apq.real, apq.imag)
                if b == 0.0:
                    continue
                e = apq / b
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * b)
                t = 1.0 / (abs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                ec = e.conjugate()
                gqp = -s * ec
                gqq = c * ec
                colp = A[:, p].copy()
                colq = A[:, q]
                A[:, p] = colp * c + colq * gqp
                A[:, q] = colp * s + colq * gqq
                rowp = A[p, :].copy()
                rowq = A[q, :]
                A[p, :] = rowp * c - rowq * (s * e)
                A[q, :] = rowp * s + rowq * (c * e)
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * b
                A[q, q] = aqq + t * b
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = vp * c + vq * gqp
                V[:, q] = vp * s + vq * gqq
    return A.diagonal().real.copy(), V, -1
