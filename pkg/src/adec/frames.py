"""Unitarily generated frames and the diagonal factors of their decimation.

A frame of length ``m`` is generated by a Hermitian ``Omega`` and a unit base
vector ``phi0``: ``phi_j = exp(2 pi i Omega j/m) phi0`` for ``j = 1..m``.  The
analysis operator stacks the conjugated vectors ``phi_j^*`` as rows, so the
samples of ``x`` are ``y_j = phi_j^* x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import (
    DEGENERATE_BASE_TOL,
    FRAME_TOL,
    HERMITIAN_TOL,
    INTEGER_EIG_TOL,
    UNIT_NORM_TOL,
)
from .errors import (
    BadBaseVector,
    DegenerateBase,
    HypothesisViolated,
    NotHermitian,
    RankDeficient,
    ZeroEigenvalue,
)
from .linalg import HermEig, as_cmatrix, herm_eig, sigma_min_sq, spectral_norm
from .operators import DecimationPlan


@dataclass(frozen=True)
class FrameSpec:
    omega: np.ndarray
    phi0: np.ndarray
    m: int
    _eig: HermEig = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        omega = as_cmatrix(self.omega)
        phi0 = np.asarray(self.phi0, dtype=np.complex128).ravel()
        if omega.shape != (phi0.size, phi0.size):
            raise ValueError(f"generator shape {omega.shape} does not match base vector length {phi0.size}")
        if np.linalg.norm(omega - omega.conj().T) > HERMITIAN_TOL * max(1.0, np.linalg.norm(omega)):
            raise NotHermitian("frame generator must be Hermitian")
        if abs(np.linalg.norm(phi0) - 1.0) > UNIT_NORM_TOL:
            raise BadBaseVector(f"||phi0|| = {np.linalg.norm(phi0):.15g}, expected 1")
        if self.m < 1:
            raise ValueError("frame length must be positive")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "_eig", herm_eig(omega))

    @classmethod
    def from_eigen(cls, eigenvalues, phi0, m: int, eigenvectors=None) -> "FrameSpec":
        """Build ``Omega = B diag(eigenvalues) B^*`` (``B`` defaults to the identity)."""
        lam = np.asarray(eigenvalues, dtype=float)
        B = np.eye(lam.size, dtype=np.complex128) if eigenvectors is None else as_cmatrix(eigenvectors)
        omega = (B * lam) @ B.conj().T
        return cls(omega=0.5 * (omega + omega.conj().T), phi0=phi0, m=m)

    def with_length(self, m: int) -> "FrameSpec":
        return FrameSpec(omega=self.omega, phi0=self.phi0, m=m)

    @property
    def k(self) -> int:
        return self.phi0.size

    @property
    def eig(self) -> HermEig:
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        """Generator eigenvalues, snapped to integers when within tolerance."""
        lam = self._eig.eigenvalues
        near = np.round(lam)
        return np.where(np.abs(lam - near) <= INTEGER_EIG_TOL, near, lam)

    def has_integer_eigenvalues(self) -> bool:
        lam = self._eig.eigenvalues
        return bool(np.all(np.abs(lam - np.round(lam)) <= INTEGER_EIG_TOL))


@dataclass(frozen=True)
class AnalysisOperator:
    phi: np.ndarray
    spec: FrameSpec

    @property
    def m(self) -> int:
        return self.phi.shape[0]

    @property
    def k(self) -> int:
        return self.phi.shape[1]

    def __matmul__(self, x):
        return self.phi @ np.asarray(x, dtype=np.complex128)


@dataclass(frozen=True)
class FrameFactors:
    C: np.ndarray        # k x k, diagonalised by B with entries 1/(1 - e^{2 pi i lam/m})
    D: np.ndarray        # k x k, diagonalised by B with entries 1 - e^{2 pi i rho lam/m}
    phi0_row: np.ndarray  # 1 x k, phi0^*


def build_ugf(spec: FrameSpec) -> AnalysisOperator:
    """Materialise the ``m x k`` analysis operator of a unitarily generated frame."""
    B = spec.eig.eigenvectors
    lam = spec.eigenvalues
    c = B.conj().T @ spec.phi0
    j = np.arange(1, spec.m + 1)[:, None]
    phase = np.exp(2j * np.pi * lam[None, :] * j / spec.m)
    phi = np.conj(phase * c[None, :]) @ B.conj().T
    return AnalysisOperator(phi=phi, spec=spec)


def check_eigenvalue_range(spec: FrameSpec, eta: int) -> None:
    """Raise unless every generator eigenvalue is a nonzero integer in ``[-eta/2, eta/2]``."""
    if not spec.has_integer_eigenvalues():
        raise HypothesisViolated("integer_eigenvalues", f"eigenvalues {spec.eig.eigenvalues}")
    lam = spec.eigenvalues
    if np.any(lam == 0):
        raise HypothesisViolated("nonzero_eigenvalues", f"eigenvalues {lam}")
    if np.any(np.abs(lam) > eta / 2):
        raise HypothesisViolated("eigenvalue_range", f"max |lambda| = {np.abs(lam).max():g} > eta/2 = {eta / 2:g}")


def frame_factors(spec: FrameSpec, plan: DecimationPlan, enforce_hypothesis: bool = True) -> FrameFactors:
    """The commuting factors that describe how summation and the step-rho difference act on the frame."""
    if plan.m != spec.m:
        raise ValueError(f"plan length {plan.m} != frame length {spec.m}")
    lam = spec.eigenvalues
    if np.any(np.abs(np.sin(np.pi * lam / spec.m)) < 1e-12):
        raise ZeroEigenvalue(f"an eigenvalue is a multiple of m={spec.m}: {lam}")
    if enforce_hypothesis:
        check_eigenvalue_range(spec, plan.eta)
    B = spec.eig.eigenvectors
    c_diag = 1.0 / (1.0 - np.exp(2j * np.pi * lam / spec.m))
    d_diag = 1.0 - np.exp(2j * np.pi * plan.rho * lam / spec.m)
    C = (B * c_diag) @ B.conj().T
    D = (B * d_diag) @ B.conj().T
    return FrameFactors(C=C, D=D, phi0_row=spec.phi0.conj()[None, :])


def lower_frame_const(spec: FrameSpec) -> float:
    """``min_s |<phi0, v_s>|^2`` over the generator eigenvectors."""
    proj = np.abs(spec.eig.eigenvectors.conj().T @ spec.phi0) ** 2
    value = float(proj.min())
    if value < DEGENERATE_BASE_TOL:
        raise DegenerateBase(f"base vector is (numerically) orthogonal to an eigenvector: {value:.3g}")
    return value


def frame_bounds(E) -> tuple[float, float]:
    """Optimal frame bounds ``(A, B)`` of the rows of ``E``."""
    E = as_cmatrix(E)
    if E.shape[0] < E.shape[1]:
        raise RankDeficient(f"{E.shape[0]} rows cannot span dimension {E.shape[1]}")
    A = sigma_min_sq(E)
    B = spectral_norm(E) ** 2
    if A < FRAME_TOL * B or B == 0.0:
        raise RankDeficient(f"lower frame bound {A:.3g} is negligible against {B:.3g}")
    return A, B


def dc_ratio(spec: FrameSpec, plan: DecimationPlan) -> float:
    """``min_s |sin(pi lam_s/eta)| / (rho |sin(pi lam_s/m)|)``; at least 2/pi under the range hypothesis."""
    lam = spec.eigenvalues
    return float(np.min(np.abs(np.sin(np.pi * lam / plan.eta)) / (plan.rho * np.abs(np.sin(np.pi * lam / plan.m)))))


def harmonic_spec(eigenvalues, m: int) -> FrameSpec:
    """Exponential harmonic frame: diagonal integer generator and flat base vector."""
    lam = np.asarray(eigenvalues, dtype=float)
    phi0 = np.ones(lam.size) / np.sqrt(lam.size)
    return FrameSpec.from_eigen(lam, phi0, m)
