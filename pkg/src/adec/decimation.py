"""Adapted and alternative decimation, V-duals, reconstruction and error bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import BOUND_SLACK
from .errors import HypothesisViolated, OverloadedInput, UnsupportedOrder
from .frames import (
    AnalysisOperator,
    FrameSpec,
    build_ugf,
    check_eigenvalue_range,
    frame_factors,
    lower_frame_const,
)
from .linalg import col_norm_sum, pinv, sigma_min_sq
from .operators import (
    DecimationPlan,
    adapted_scaled,
    alternative_scaled,
    apply_dbar,
    apply_delta_inv,
    apply_sub_sample,
    delta_pow,
)
from .quantizer import QuantizationOutput

SCHEMES = ("adapted", "alternative")


@dataclass(frozen=True)
class DecimationOperators:
    plan: DecimationPlan
    scheme: str
    scaled: np.ndarray   # rho^r * A as an exact integer eta x m matrix
    A: np.ndarray        # eta x m, floating
    A_phi: np.ndarray    # eta x k
    F: np.ndarray        # k x m dual, F @ phi = I

    @property
    def scale(self) -> int:
        return self.plan.rho**self.plan.r


@dataclass(frozen=True)
class BoundReport:
    err: float
    bound: float
    lfb: float
    lfb_bound: float
    var: float
    var_bound: float
    u_inf: float
    chain_bound: float  # col_norm_sum(F delta^r) * ||u||_inf, valid for any dual

    @property
    def ok(self) -> bool:
        return (
            self.err <= self.bound + BOUND_SLACK
            and self.lfb >= self.lfb_bound - BOUND_SLACK
            and self.var <= self.var_bound + BOUND_SLACK
        )


def check_hypotheses(spec: FrameSpec, plan: DecimationPlan, require_eta: bool = True) -> float:
    """Validate the hypotheses of the adapted-decimation error theorem; returns ``C_phi0``.

    ``rho | m`` is enforced by :class:`DecimationPlan` itself.
    """
    if spec.m != plan.m:
        raise HypothesisViolated("frame_length", f"frame has m={spec.m}, plan has m={plan.m}")
    if require_eta and plan.eta < 3 * plan.r * spec.k:
        raise HypothesisViolated("eta_ge_3rk", f"eta={plan.eta} < 3*r*k={3 * plan.r * spec.k}")
    check_eigenvalue_range(spec, plan.eta)
    try:
        return lower_frame_const(spec)
    except Exception as exc:  # DegenerateBase
        raise HypothesisViolated("base_vector_projection", str(exc)) from exc


def _to_float(M: np.ndarray) -> np.ndarray:
    return np.asarray(M.astype(np.float64) if M.dtype == object else M, dtype=np.float64)


def _assemble(plan: DecimationPlan, scheme: str, scaled: np.ndarray, phi: np.ndarray) -> DecimationOperators:
    c = float(plan.rho**plan.r)
    S = _to_float(scaled)
    M = S @ phi
    # (c A phi)^+ (c A) == (A phi)^+ A; divide by c only for the reported A and A phi
    F = pinv(M) @ S
    return DecimationOperators(plan=plan, scheme=scheme, scaled=scaled, A=S / c, A_phi=M / c, F=F)


def adapted(plan: DecimationPlan, frame: AnalysisOperator) -> DecimationOperators:
    """Adapted decimation ``A_r = rho^-r D_rho dbar^r delta^-r`` and its dual ``(A_r phi)^+ A_r``."""
    check_hypotheses(frame.spec, plan)
    return _assemble(plan, "adapted", adapted_scaled(plan), frame.phi)


def alternative(plan: DecimationPlan, frame: AnalysisOperator) -> DecimationOperators:
    """Alternative decimation ``D_rho S_rho^r`` (orders 1 and 2 only)."""
    if plan.r not in (1, 2):
        raise UnsupportedOrder(f"alternative decimation is defined for r in {{1, 2}}, got r={plan.r}")
    check_hypotheses(frame.spec, plan, require_eta=False)
    return _assemble(plan, "alternative", alternative_scaled(plan), frame.phi)


def build(scheme: str, plan: DecimationPlan, frame: AnalysisOperator) -> DecimationOperators:
    if scheme == "adapted":
        return adapted(plan, frame)
    if scheme == "alternative":
        return alternative(plan, frame)
    raise ValueError(f"unknown decimation scheme {scheme!r}")


def v_dual(V, phi) -> np.ndarray:
    """The V-dual ``(V phi)^+ V``; raises RankDeficient if ``V phi`` is not a frame."""
    V = np.asarray(V)
    phi = np.asarray(phi.phi if isinstance(phi, AnalysisOperator) else phi)
    return pinv(V @ phi) @ V


def beta_matrix(beta: float, k: int, m: int) -> np.ndarray:
    """``k x m`` block-diagonal matrix with blocks ``[beta^-1, ..., beta^-(m/k)]``."""
    if m % k:
        raise ValueError(f"k={k} must divide m={m}")
    n = m // k
    block = beta ** -np.arange(1, n + 1, dtype=float)
    V = np.zeros((k, m))
    for i in range(k):
        V[i, i * n : (i + 1) * n] = block
    return V


def reconstruct(F, q) -> np.ndarray:
    return np.asarray(F) @ np.asarray(q)


def error_bound(k: int, eta: int, c_phi0: float, r: int, rho: int, u_inf: float) -> float:
    """``(4 / (k eta C)) (pi^2 eta)^r ||u||_inf / rho^r``."""
    return 4.0 / (k * eta * c_phi0) * (np.pi**2 * eta) ** r * u_inf / rho**r


def lower_frame_bound_estimate(k: int, c_phi0: float, r: int) -> float:
    return k * c_phi0 * (2.0 / np.pi) ** (2 * r)


def variation_bound(eta: int, r: int) -> float:
    return 2.0 ** (2 * r + 2) * float(eta) ** (r - 1)


def bitrate_constant(k: int, eta: int, c_phi0: float, L: int, r: int) -> float:
    """``8L / (k eta C) (2 pi^2)^r``, the constant of the error-versus-bits law."""
    return 8.0 * L / (k * eta * c_phi0) * (2 * np.pi**2) ** r


def variation(ops: DecimationOperators) -> float:
    """Column-norm sum of ``(A phi)^* delta_eta^r``."""
    D = delta_pow(ops.plan.eta, ops.plan.r).astype(float)
    return col_norm_sum(ops.A_phi.conj().T @ D)


def bound_report(x, spec: FrameSpec, plan: DecimationPlan, quantization: QuantizationOutput,
                 ops: DecimationOperators) -> BoundReport:
    if quantization.overloaded:
        raise OverloadedInput("quantizer overloaded; the error bounds do not apply")
    x = np.asarray(x, dtype=np.complex128).ravel()
    c_phi0 = lower_frame_const(spec)
    k, eta, r, rho = spec.k, plan.eta, plan.r, plan.rho
    x_rec = reconstruct(ops.F, quantization.q)
    u_inf = quantization.u_inf
    Hm = delta_pow(plan.m, r).astype(float)
    return BoundReport(
        err=float(np.linalg.norm(x - x_rec)),
        bound=error_bound(k, eta, c_phi0, r, rho, u_inf),
        lfb=sigma_min_sq(ops.A_phi),
        lfb_bound=lower_frame_bound_estimate(k, c_phi0, r),
        var=variation(ops),
        var_bound=variation_bound(eta, r),
        u_inf=u_inf,
        chain_bound=col_norm_sum(ops.F @ Hm) * u_inf,
    )


def error_via_chain(ops: DecimationOperators, u) -> float:
    """``rho^-r || (A phi)^+ delta_eta^r D_rho u ||``: the reconstruction error rewritten through the noise."""
    plan = ops.plan
    Du = apply_sub_sample(np.asarray(u, dtype=np.complex128), plan.rho)
    D = delta_pow(plan.eta, plan.r).astype(float)
    return float(np.linalg.norm(pinv(ops.A_phi) @ (D @ Du))) / plan.rho**plan.r


def expansion_check(spec: FrameSpec, plan: DecimationPlan, enforce_hypothesis: bool = True) -> float:
    """Relative Frobenius gap between ``D dbar^r delta^-r phi`` and its factor expansion."""
    r, rho, m = plan.r, plan.rho, plan.m
    phi = build_ugf(spec).phi
    lhs = _to_float(adapted_scaled(plan)) @ phi
    if r == 0:
        rhs = apply_sub_sample(phi, rho)
        return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))
    f = frame_factors(spec, plan, enforce_hypothesis=enforce_hypothesis)
    mp = np.linalg.matrix_power
    Cr = mp(f.C, r)
    ones = np.ones((m, 1), dtype=np.int64)
    inner = phi @ mp(f.D, r) @ Cr
    for j in range(r):
        col = _to_float(apply_dbar(ones, rho, r - j))
        inner = inner + col @ (f.phi0_row @ mp(f.D, j) @ Cr)
    tail = np.zeros_like(inner)
    for j in range(r):
        col = _to_float(apply_delta_inv(ones, j))
        tail = tail + col @ (f.phi0_row @ mp(f.C, r - j))
    inner = inner - apply_dbar(tail, rho, r)
    rhs = apply_sub_sample(inner, rho)
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))
