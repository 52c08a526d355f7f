"""Dense complex linear algebra used by the frame and decimation code.

Matrices are plain ``numpy`` ``complex128`` arrays.  The Hermitian
eigensolver is a cyclic Jacobi iteration (compiled when available); every
other routine here is built on top of it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import _core
from .constants import (
    HERMITIAN_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    PINV_COND_SWITCH,
    RANK_TOL,
)
from .errors import NoConvergence, NotHermitian, RankDeficient


def as_cmatrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex128 array (copy only if needed)."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class HermEig:
    eigenvalues: np.ndarray   # ascending, real
    eigenvectors: np.ndarray  # unitary, columns

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def herm_eig(M) -> HermEig:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises
    ------
    NotHermitian
        If ``M`` is not square or ``||M - M*||_F > 1e-12 ||M||_F``.
    NoConvergence
        If the sweep budget is exhausted.
    """
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        raise NotHermitian(f"matrix is not square: {A.shape}")
    norm = np.linalg.norm(A)
    if np.linalg.norm(A - A.conj().T) > HERMITIAN_TOL * norm:
        raise NotHermitian("matrix differs from its conjugate transpose")
    A = 0.5 * (A + A.conj().T)
    w, V, sweeps = _core.jacobi_eigh(A, JACOBI_MAX_SWEEPS, JACOBI_OFFDIAG_TOL)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(w, kind="stable")
    return HermEig(np.asarray(w)[order], np.asarray(V)[:, order])


def _gram_eigenvalues(M: np.ndarray) -> np.ndarray:
    # eigenvalues of M*M, computed on the smaller Gram matrix; padded with zeros
    rows, cols = M.shape
    if rows >= cols:
        w = herm_eig(M.conj().T @ M).eigenvalues
    else:
        w = herm_eig(M @ M.conj().T).eigenvalues
        w = np.concatenate([np.zeros(cols - rows), w])
    return np.clip(w, 0.0, None)


def spectral_norm(M) -> float:
    """Largest singular value."""
    A = as_cmatrix(M)
    if A.size == 0:
        return 0.0
    return float(np.sqrt(_gram_eigenvalues(A)[-1]))


def sigma_min_sq(M) -> float:
    """Smallest eigenvalue of ``M* M``, i.e. the optimal lower frame bound of the rows of ``M``."""
    A = as_cmatrix(M)
    if A.size == 0:
        return 0.0
    return float(_gram_eigenvalues(A)[0])


def col_norm_sum(M) -> float:
    """Sum of the Euclidean norms of the columns; an upper bound for ``||M||_{inf,2}``."""
    A = as_cmatrix(M)
    return float(np.linalg.norm(A, axis=0).sum())


def inf2_norm_lower_estimate(M, trials: int = 200, seed: int = 0) -> float:
    """Lower estimate of ``||M||_{inf,2}`` from random unimodular test vectors."""
    A = as_cmatrix(M)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        sigma = np.exp(2j * np.pi * rng.random(A.shape[1]))
        best = max(best, float(np.linalg.norm(A @ sigma)))
    return best


def pinv(M) -> np.ndarray:
    """Left inverse ``(M* M)^{-1} M*`` of a full-column-rank matrix.

    Solved through a Cholesky factorisation of the normal equations unless
    ``M* M`` is badly conditioned, in which case the Jacobi eigenbasis of
    ``M* M`` is used instead.
    """
    A = as_cmatrix(M)
    G = A.conj().T @ A
    eig = herm_eig(G)
    lam = eig.eigenvalues
    lmax = lam[-1] if lam.size else 0.0
    lmin = lam[0] if lam.size else 0.0
    if lmax <= 0.0 or lmin <= 0.0 or np.sqrt(lmin) <= RANK_TOL * np.sqrt(lmax):
        raise RankDeficient(
            f"sigma_min/sigma_max = {np.sqrt(max(lmin, 0.0) / lmax) if lmax > 0 else 0.0:.3g}"
        )
    Ah = A.conj().T
    if lmax / lmin <= PINV_COND_SWITCH:
        return cho_solve(cho_factor(G, lower=True), Ah)
    V = eig.eigenvectors
    return (V / lam) @ (V.conj().T @ Ah)
