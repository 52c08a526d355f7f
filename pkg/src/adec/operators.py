"""Exact integer difference, integration and decimation operators.

All builders return ``numpy`` integer arrays (``int64``, or ``object`` holding
Python ints when the entries could overflow 64 bits) so identities between
them can be checked with zero error.  Indices in docstrings are 1-based to
match the usual matrix notation; the arrays themselves are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import InvalidBlock

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class DecimationPlan:
    """Order ``r``, frame length ``m`` and block size ``rho`` (``rho`` divides ``m``)."""

    r: int
    m: int
    rho: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.m < 1 or self.rho < 1:
            raise InvalidBlock(f"invalid plan r={self.r}, m={self.m}, rho={self.rho}")
        if self.m % self.rho:
            raise InvalidBlock(f"rho={self.rho} does not divide m={self.m}")

    @property
    def eta(self) -> int:
        return self.m // self.rho

    @classmethod
    def from_eta(cls, r: int, eta: int, rho: int) -> "DecimationPlan":
        return cls(r=r, m=eta * rho, rho=rho)


def delta(m: int) -> np.ndarray:
    """Backward difference: unit diagonal, -1 on the subdiagonal."""
    D = np.eye(m, dtype=np.int64)
    if m > 1:
        D[np.arange(1, m), np.arange(m - 1)] = -1
    return D


def delta_inv(m: int) -> np.ndarray:
    """Inverse of :func:`delta`: the lower-triangular all-ones (cumulative sum) matrix."""
    return np.tril(np.ones((m, m), dtype=np.int64))


def delta_pow(m: int, r: int) -> np.ndarray:
    """``delta(m) ** r``; row ``n`` holds ``(-1)^l C(r, l)`` at column ``n - l``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    D = np.zeros((m, m), dtype=np.int64)
    for l in range(min(r, m - 1) + 1):
        idx = np.arange(l, m)
        D[idx, idx - l] = (-1) ** l * comb(r, l)
    return D


def delta_inv_pow(m: int, r: int) -> np.ndarray:
    """``delta_inv(m) ** r``; entry ``(n, j)`` equals ``C(n - j + r - 1, r - 1)`` for ``j <= n``."""
    if r == 0:
        return np.eye(m, dtype=np.int64)
    dtype = np.int64 if comb(m + r - 1, r - 1) < _INT64_SAFE else object
    D = np.zeros((m, m), dtype=dtype)
    for d in range(m):
        idx = np.arange(d, m)
        D[idx, idx - d] = comb(d + r - 1, r - 1)
    return D


def dbar_rho(m: int, rho: int) -> np.ndarray:
    """Cyclic step-``rho`` difference used by adapted decimation.

    Row ``t`` is ``e_t - e_{t-rho}`` for ``t > rho``, ``e_rho`` for ``t = rho``
    and ``e_t - e_{m+t-rho}`` for ``t < rho``.  No ``1/rho`` normalisation.
    """
    if rho < 1 or rho > m:
        raise InvalidBlock(f"block size rho={rho} must lie in [1, m={m}]")
    D = np.eye(m, dtype=np.int64)
    for t in range(1, m + 1):
        if t > rho:
            D[t - 1, t - rho - 1] -= 1
        elif t < rho:
            D[t - 1, m + t - rho - 1] -= 1
    return D


def sub_sample(m: int, rho: int) -> np.ndarray:
    """The ``(m/rho) x m`` selector of rows ``rho, 2 rho, ..., m``."""
    if rho < 1 or m % rho:
        raise InvalidBlock(f"rho={rho} does not divide m={m}")
    eta = m // rho
    D = np.zeros((eta, m), dtype=np.int64)
    D[np.arange(eta), np.arange(1, eta + 1) * rho - 1] = 1
    return D


def s_rho_scaled(m: int, rho: int) -> np.ndarray:
    """``rho * S_rho`` as an integer matrix (moving-sum with cyclic correction)."""
    if rho < 1 or rho > m:
        raise InvalidBlock(f"block size rho={rho} must lie in [1, m={m}]")
    S = np.zeros((m, m), dtype=np.int64)
    for l in range(1, m + 1):
        if l >= rho:
            S[l - 1, l - rho : l] = 1
        else:
            S[l - 1, l : m - rho + l] = -1
    return S


def s_rho(m: int, rho: int) -> np.ndarray:
    """The alternative-decimation integration operator with exact rational entries."""
    S = s_rho_scaled(m, rho)
    out = np.empty(S.shape, dtype=object)
    for idx, v in np.ndenumerate(S):
        out[idx] = Fraction(int(v), rho)
    return out


@lru_cache(maxsize=None)
def a_seq(l: int, s: int) -> int:
    """Iterated partial sums: ``a(0, s) = [s >= 1]``, ``a(l, s) = sum_{j<=s} a(l-1, j)``."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    if s < 1:
        return 0
    if l == 0:
        return 1
    return sum(a_seq(l - 1, j) for j in range(1, s + 1))


def a_seq_closed(l: int, s: int) -> int:
    """Closed form ``C(s + l - 1, l)`` of :func:`a_seq` for ``s >= 1``."""
    return comb(s + l - 1, l) if s >= 1 else 0


# --- structured application (no dense products) ---------------------------

def _widen(X: np.ndarray, bound: int) -> np.ndarray:
    if X.dtype != object and bound >= _INT64_SAFE:
        return X.astype(object)
    return X


def apply_delta_inv(X: np.ndarray, times: int = 1) -> np.ndarray:
    """``delta_inv(m)**times @ X`` via repeated cumulative sums along axis 0."""
    X = np.asarray(X)
    m = X.shape[0]
    if X.dtype.kind in "iu" or X.dtype == object:
        peak = int(np.max(np.abs(X))) if X.size else 0
        X = _widen(X.astype(np.int64) if X.dtype.kind in "iu" else X, peak * comb(m + times, times))
    for _ in range(times):
        X = np.cumsum(X, axis=0, dtype=X.dtype)
    return X


def apply_dbar(X: np.ndarray, rho: int, times: int = 1) -> np.ndarray:
    """``dbar_rho(m, rho)**times @ X`` by shifted row differences."""
    X = np.asarray(X)
    m = X.shape[0]
    if rho < 1 or rho > m:
        raise InvalidBlock(f"block size rho={rho} must lie in [1, m={m}]")
    if X.dtype.kind in "iu":
        peak = int(np.max(np.abs(X))) if X.size else 0
        X = _widen(X.astype(np.int64), peak * 2**times)
    for _ in range(times):
        Y = X.copy()
        # rows t > rho: subtract row t - rho; rows t < rho: subtract row m + t - rho
        Y[rho:] = X[rho:] - X[: m - rho]
        if rho > 1:
            Y[: rho - 1] = X[: rho - 1] - X[m - rho : m - 1]
        X = Y
    return X


def apply_sub_sample(X: np.ndarray, rho: int) -> np.ndarray:
    X = np.asarray(X)
    if X.shape[0] % rho:
        raise InvalidBlock(f"rho={rho} does not divide m={X.shape[0]}")
    return X[rho - 1 :: rho]


def adapted_scaled(plan: DecimationPlan) -> np.ndarray:
    """``rho^r A_r = D_rho dbar^r delta^{-r}`` as an exact ``eta x m`` integer matrix."""
    m, rho, r = plan.m, plan.rho, plan.r
    X = apply_delta_inv(np.eye(m, dtype=np.int64), r)
    X = apply_dbar(X, rho, r)
    return apply_sub_sample(X, rho)


def apply_s_scaled(X: np.ndarray, rho: int, times: int = 1) -> np.ndarray:
    """``(rho S_rho)**times @ X`` using window sums of a prefix-sum table."""
    X = np.asarray(X)
    m = X.shape[0]
    if rho < 1 or rho > m:
        raise InvalidBlock(f"block size rho={rho} must lie in [1, m={m}]")
    if X.dtype.kind in "iu":
        peak = int(np.max(np.abs(X))) if X.size else 0
        X = _widen(X.astype(np.int64), peak * m**times)
    for _ in range(times):
        P = np.zeros((m + 1,) + X.shape[1:], dtype=X.dtype)
        P[1:] = np.cumsum(X, axis=0, dtype=X.dtype)
        Y = np.empty_like(X)
        # rows l >= rho: sum of rows l-rho+1..l
        Y[rho - 1 :] = P[rho:] - P[: m - rho + 1]
        # rows l < rho: minus the sum of rows l+1..m-rho+l
        if rho > 1:
            l = np.arange(1, rho)
            Y[: rho - 1] = P[l] - P[m - rho + l]
        X = Y
    return X


def alternative_scaled(plan: DecimationPlan) -> np.ndarray:
    """``rho^r D_rho S_rho^r = D_rho (rho S_rho)^r`` as an exact integer matrix."""
    X = apply_s_scaled(np.eye(plan.m, dtype=np.int64), plan.rho, plan.r)
    return apply_sub_sample(X, plan.rho)


def int_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product; falls back to Python ints when int64 could overflow."""
    if A.dtype == object or B.dtype == object:
        return np.dot(A.astype(object), B.astype(object))
    a = int(np.max(np.abs(A))) if A.size else 0
    b = int(np.max(np.abs(B))) if B.size else 0
    if a * b * max(A.shape[1], 1) >= _INT64_SAFE:
        return np.dot(A.astype(object), B.astype(object))
    return A @ B
