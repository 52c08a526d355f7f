"""Named verification checks over the standard instance grid.

Each check returns a :class:`CheckResult`; :func:`verify` runs a level's
worth of them and never raises on a failed check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import codec
from .decimation import (
    adapted,
    alternative,
    bitrate_constant,
    bound_report,
    error_via_chain,
    expansion_check,
)
from .frames import (
    FrameSpec,
    build_ugf,
    dc_ratio,
    frame_factors,
    harmonic_spec,
    lower_frame_const,
)
from .harness import fit_slope
from .linalg import col_norm_sum, sigma_min_sq
from .operators import (
    DecimationPlan,
    a_seq,
    a_seq_closed,
    adapted_scaled,
    apply_delta_inv,
    dbar_rho,
    delta,
    delta_inv,
    delta_pow,
    int_matmul,
    s_rho,
    s_rho_scaled,
    sub_sample,
)
from .quantizer import Alphabet, sigma_delta, stability_margin

E1_ALPHABET = Alphabet(0.25, 8)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


# --- instance families -------------------------------------------------------

def _rotated_spec(m: int) -> FrameSpec:
    # k = 2 frame with a generic eigenbasis and base vector
    rng = np.random.default_rng(7)
    Z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B, _ = np.linalg.qr(Z)
    phi0 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return FrameSpec.from_eigen([1, -2], phi0 / np.linalg.norm(phi0), m, B)


FAMILIES: dict[str, tuple[int, Callable[[int], FrameSpec]]] = {
    "E1": (1, lambda m: FrameSpec.from_eigen([1], [1], m)),
    "H2": (2, lambda m: harmonic_spec([1, -1], m)),
    "R2": (2, _rotated_spec),
}


def lemma_grid():
    """``(k, r, eta, rho)`` with ``k in {1,2}``, ``r in {1,2,3}``, ``eta in {3rk, 6rk}``, ``rho in {2,4,8}``."""
    for k in (1, 2):
        for r in (1, 2, 3):
            for eta in (3 * r * k, 6 * r * k):
                for rho in (2, 4, 8):
                    yield k, r, eta, rho


def _specs_for_k(k: int, m: int):
    return [(name, make(m)) for name, (kk, make) in FAMILIES.items() if kk == k]


def _timed(name: str, fn, *args, **kw) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = fn(*args, **kw)
    except Exception as exc:  # a crashing check is a failed check
        res = CheckResult(name, False, f"raised {type(exc).__name__}: {exc}")
    res.name = name
    res.seconds = time.perf_counter() - t0
    return res


# --- integer-exact checks ----------------------------------------------------

def check_twist_scale(dbar=dbar_rho) -> CheckResult:
    bad = []
    for rho in range(1, 9):
        for eta in range(1, 13):
            m = rho * eta
            D = sub_sample(m, rho)
            if not np.array_equal(D @ dbar(m, rho), delta(eta) @ D):
                bad.append((rho, eta))
    return CheckResult("", not bad, f"{96 - len(bad)}/96 (rho, eta) pairs exact", data={"failures": bad})


def check_alt_vs_ada(dbar=dbar_rho) -> CheckResult:
    bad = []
    for rho in range(1, 9):
        for eta in range(1, 13):
            m = rho * eta
            if not np.array_equal(dbar(m, rho) @ delta_inv(m), s_rho_scaled(m, rho)):
                bad.append((rho, eta))
    # rational form on the small end of the grid
    for rho in range(1, 9):
        for eta in range(1, 13):
            m = rho * eta
            if m > 24:
                continue
            lhs = s_rho(m, rho) * Fraction(rho)
            rhs = int_matmul(dbar(m, rho), delta_inv(m))
            if not all(lhs[i, j] == int(rhs[i, j]) for i in range(m) for j in range(m)):
                bad.append(("rational", rho, eta))
    return CheckResult("", not bad, f"{len(bad)} mismatches", data={"failures": bad})


def check_delta_family() -> CheckResult:
    bad = []
    for m in range(1, 25):
        if not np.array_equal(delta_inv(m) @ delta(m), np.eye(m, dtype=np.int64)):
            bad.append(("inverse", m))
        for r in range(0, 5):
            P = np.eye(m, dtype=np.int64)
            for _ in range(r):
                P = P @ delta(m)
            if not np.array_equal(P, delta_pow(m, r)):
                bad.append(("power", m, r))
    for j in range(0, 4):
        for m in range(1, 13):
            col = apply_delta_inv(np.ones((m, 1), dtype=np.int64), j)[:, 0]
            if [int(v) for v in col] != [a_seq(j, l) for l in range(1, m + 1)]:
                bad.append(("a_seq", j, m))
    for l in range(0, 5):
        for s in range(1, 21):
            if a_seq(l, s) != a_seq_closed(l, s) or a_seq_closed(l, s) != comb(s + l - 1, l):
                bad.append(("closed", l, s))
    return CheckResult("", not bad, f"{len(bad)} mismatches", data={"failures": bad})


def check_recursivity() -> CheckResult:
    bad = []
    rng = np.random.default_rng(3)
    for r in (1, 2, 3, 4):
        for eta in (1, 3, 6, 12):
            for rho in (1, 2, 4, 8):
                plan = DecimationPlan.from_eta(r, eta, rho)
                S = adapted_scaled(plan)
                for s in range(1, eta + 1):
                    if np.any(S[s - 1, s * rho :] != 0):
                        bad.append(("triangular", r, eta, rho, s))
                q = rng.integers(-5, 5, plan.m)
                base = int_matmul(S, q[:, None])[:, 0]
                for s in range(1, eta):
                    q2 = q.copy()
                    q2[s * rho :] = rng.integers(-5, 5, plan.m - s * rho)
                    pert = int_matmul(S, q2[:, None])[:, 0]
                    if not np.array_equal(base[:s], pert[:s]):
                        bad.append(("causal", r, eta, rho, s))
    return CheckResult("", not bad, f"{len(bad)} violations", data={"failures": bad})


def check_alternative_r1_equal() -> CheckResult:
    from .operators import alternative_scaled

    bad = []
    for eta in (1, 3, 6, 12):
        for rho in (1, 2, 4, 8):
            plan = DecimationPlan.from_eta(1, eta, rho)
            if not np.array_equal(adapted_scaled(plan), alternative_scaled(plan)):
                bad.append((eta, rho))
    return CheckResult("", not bad, f"{len(bad)} mismatches")


# --- floating checks ---------------------------------------------------------

def check_factor_lemmas(tol: float = 1e-8) -> CheckResult:
    worst = {"cumsum_factor": 0.0, "dbar_factor": 0.0, "expansion": 0.0, "commute": 0.0}
    for k, r, eta, rho in lemma_grid():
        plan = DecimationPlan.from_eta(r, eta, rho)
        m = plan.m
        for _, spec in _specs_for_k(k, m):
            phi = build_ugf(spec).phi
            f = frame_factors(spec, plan)
            ones = np.ones((m, 1))
            lhs = apply_delta_inv(phi)
            rhs = phi @ f.C - ones @ (f.phi0_row @ f.C)
            worst["cumsum_factor"] = max(worst["cumsum_factor"], np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))
            Db = dbar_rho(m, rho).astype(float)
            lhs = Db @ phi
            rhs = phi @ f.D + (Db @ ones) @ f.phi0_row
            worst["dbar_factor"] = max(worst["dbar_factor"], np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))
            worst["expansion"] = max(worst["expansion"], expansion_check(spec, plan))
            cd = f.C @ f.D - f.D @ f.C
            worst["commute"] = max(worst["commute"], np.linalg.norm(cd) / np.linalg.norm(f.C @ f.D))
    ok = all(v <= tol for v in worst.values())
    detail = ", ".join(f"{k}={v:.2e}" for k, v in worst.items()) + f" (tol {tol:g})"
    return CheckResult("", ok, detail, data=worst)


def check_frame_bounds(slack: float = 1e-9) -> CheckResult:
    worst_ratio = np.inf
    worst_dc = np.inf
    bad = []
    for k, r, eta, rho in lemma_grid():
        plan = DecimationPlan.from_eta(r, eta, rho)
        for name, spec in _specs_for_k(k, plan.m):
            ops = adapted(plan, build_ugf(spec))
            c = lower_frame_const(spec)
            lfb = sigma_min_sq(ops.A_phi)
            bound = k * c * (2 / np.pi) ** (2 * r)
            worst_ratio = min(worst_ratio, lfb / bound)
            if lfb < bound - slack:
                bad.append(("lfb", name, r, eta, rho))
            dc = dc_ratio(spec, plan)
            worst_dc = min(worst_dc, dc)
            if dc < 2 / np.pi:
                bad.append(("dc", name, r, eta, rho))
    return CheckResult("", not bad, f"min lfb/bound={worst_ratio:.3f}, min dc ratio={worst_dc:.4f} >= 2/pi",
                       data={"failures": bad})


def check_variation(slack: float = 1e-9) -> CheckResult:
    worst = 0.0
    bad = []
    for k, r, eta, rho in lemma_grid():
        plan = DecimationPlan.from_eta(r, eta, rho)
        for name, spec in _specs_for_k(k, plan.m):
            ops = adapted(plan, build_ugf(spec))
            var = col_norm_sum(ops.A_phi.conj().T @ delta_pow(eta, r).astype(float))
            bound = 2.0 ** (2 * r + 2) * eta ** (r - 1)
            worst = max(worst, var / bound)
            if var > bound + slack:
                bad.append((name, r, eta, rho))
    return CheckResult("", not bad, f"max var/bound={worst:.4f}", data={"failures": bad})


@dataclass
class RunOutcome:
    family: str
    k: int
    r: int
    eta: int
    rho: int
    m: int
    L: int
    c_phi0: float
    err: float
    bound: float
    u_inf: float
    chain_err: float
    bits_actual: int
    bits_formula: float
    roundtrip_exact: bool


def randomized_runs(min_runs: int = 500, seed: int = 2024, alphabet: Alphabet = E1_ALPHABET) -> list[RunOutcome]:
    """Quantize-decimate-reconstruct runs over all families, orders, ``eta in {3rk, 6rk}``, ``rho in {2,4,8,16}``."""
    points = []
    for fam, (k, make) in FAMILIES.items():
        for r in (1, 2, 3):
            for eta in (3 * r * k, 6 * r * k):
                for rho in (2, 4, 8, 16):
                    points.append((fam, k, make, r, eta, rho))
    per_point = -(-min_runs // len(points))
    rng = np.random.default_rng(seed)
    out = []
    for fam, k, make, r, eta, rho in points:
        plan = DecimationPlan.from_eta(r, eta, rho)
        spec = make(plan.m)
        frame = build_ugf(spec)
        ops = adapted(plan, frame)
        c = lower_frame_const(spec)
        radius = alphabet.L * alphabet.delta - (2**r - 1) * alphabet.delta / 2
        scaled = ops.scaled
        for _ in range(per_point):
            g = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            x = radius * rng.random() ** (1 / (2 * k)) * g / np.linalg.norm(g)
            quant = sigma_delta(frame.phi @ x, r, alphabet)
            if quant.overloaded:
                continue
            rep = bound_report(x, spec, plan, quant, ops)
            block = codec.encode(quant, plan)
            _, pairs = codec.decode(codec.EncodedBlock.from_bytes(block.to_bytes()))
            want_re = int_matmul(scaled, (2 * quant.levels_re + 1)[:, None])[:, 0]
            want_im = int_matmul(scaled, (2 * quant.levels_im + 1)[:, None])[:, 0]
            exact = [p[0] for p in pairs] == [int(v) for v in want_re] and [p[1] for p in pairs] == [
                int(v) for v in want_im
            ]
            out.append(RunOutcome(
                family=fam, k=k, r=r, eta=eta, rho=rho, m=plan.m, L=alphabet.L, c_phi0=c,
                err=rep.err, bound=rep.bound, u_inf=rep.u_inf, chain_err=error_via_chain(ops, quant.u),
                bits_actual=block.payload_bits, bits_formula=codec.bit_budget(plan, alphabet.L),
                roundtrip_exact=exact,
            ))
    return out


def check_error_bound(runs: list[RunOutcome], slack: float = 1e-9) -> CheckResult:
    viol = [o for o in runs if o.err > o.bound + slack]
    chain = max((abs(o.err - o.chain_err) / max(o.err, 1e-300) for o in runs), default=0.0)
    ok = not viol and len(runs) >= 500 and chain <= 1e-9
    ratio = max((o.err / o.bound for o in runs), default=0.0)
    return CheckResult("", ok, f"{len(viol)} violations over {len(runs)} runs; max err/bound={ratio:.3g}; "
                               f"chain rel. gap={chain:.1e}")


def bitrate_bound(o: RunOutcome) -> float:
    return bitrate_constant(o.k, o.eta, o.c_phi0, o.L, o.r) * o.u_inf * 2.0 ** (-o.bits_formula / (2 * o.eta))


def check_bitrate_law(runs: list[RunOutcome], slack: float = 1e-12) -> CheckResult:
    viol = [o for o in runs if o.err > bitrate_bound(o) + slack]
    ratio = max((o.err / bitrate_bound(o) for o in runs), default=0.0)
    where = sorted({(o.family, o.r, o.eta) for o in viol})
    return CheckResult("", not viol, f"{len(viol)} violations over {len(runs)} runs; max err/bound={ratio:.3g}"
                                     + (f"; failing (family, r, eta): {where}" if where else ""),
                       data={"violations": len(viol), "max_ratio": ratio, "where": where})


def check_bitrate_law_rederived(runs: list[RunOutcome], slack: float = 1e-12) -> CheckResult:
    """Error-versus-bits law with the constant re-derived from the error bound, ``8L/(k eta C) (2 pi^2 eta^2)^r``."""
    def bound(o):
        const = 8.0 * o.L / (o.k * o.eta * o.c_phi0) * (2 * np.pi**2 * o.eta**2) ** o.r
        return const * o.u_inf * 2.0 ** (-o.bits_formula / (2 * o.eta))

    viol = [o for o in runs if o.err > bound(o) + slack]
    agree = max((abs(bound(o) - o.bound) / o.bound for o in runs if o.bound > 0), default=0.0)
    return CheckResult("", not viol and agree < 1e-9,
                       f"{len(viol)} violations; identical to the rho-form bound within {agree:.1e}")


def check_codec(runs: list[RunOutcome]) -> CheckResult:
    bad_rt = [o for o in runs if not o.roundtrip_exact]
    bad_budget = [o for o in runs if o.bits_actual > o.bits_formula + 4 * o.eta]
    worst_exp = 0.0
    for k, r, eta, rho in lemma_grid():
        for L in (1, 2, 8, 64):
            plan = DecimationPlan.from_eta(r, eta, rho)
            lhs = 2.0 ** (-codec.bit_budget(plan, L) / (2 * eta))
            rhs = (2 * plan.m) ** (-r) / (2 * L)
            worst_exp = max(worst_exp, abs(lhs - rhs) / rhs)
    ok = not bad_rt and not bad_budget and worst_exp <= 1e-12
    return CheckResult("", ok, f"roundtrip failures={len(bad_rt)}, budget violations={len(bad_budget)} "
                               f"over {len(runs)} runs; exponent identity rel. gap={worst_exp:.1e}")


def check_stability(n_signals: int = 1000, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    tested = 0
    while tested < n_signals:
        r = int(rng.integers(1, 4))
        L = int(rng.integers(r + 1, 12))
        delta = float(rng.uniform(0.05, 2.0))
        alph = Alphabet(delta, L)
        room = L * delta - (2**r - 1) * delta / 2
        if room <= 0:
            continue
        m = int(rng.integers(1, 400))
        amp = room * rng.uniform(0.0, 1.0)
        y = amp * (rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m))
        if stability_margin(y, r, alph) < 0:
            continue
        tested += 1
        out = sigma_delta(y, r, alph)
        if out.overloaded or out.u_inf_component > delta / 2 * (1 + 1e-12):
            bad += 1
    return CheckResult("", bad == 0, f"{bad} failures over {tested} signals with nonnegative margin")


def decay_slopes(rhos=(2, 4, 8, 16, 32), trials: int = 10, seed: int = 5) -> dict[int, float]:
    """Fitted ``log2 err`` vs ``log2 rho`` slope for the k=1 family, ``eta = 6r``."""
    rng = np.random.default_rng(seed)
    slopes = {}
    for r in (1, 2, 3):
        eta = 6 * r
        radius = E1_ALPHABET.L * E1_ALPHABET.delta - (2**r - 1) * E1_ALPHABET.delta / 2
        xs = [radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()) for _ in range(trials)]
        pts_r, pts_e = [], []
        for rho in rhos:
            plan = DecimationPlan.from_eta(r, eta, rho)
            spec = FrameSpec.from_eigen([1], [1], plan.m)
            frame = build_ugf(spec)
            ops = adapted(plan, frame)
            for x in xs:
                quant = sigma_delta(frame.phi[:, 0] * x, r, E1_ALPHABET)
                err = abs(x - (ops.F @ quant.q)[0])
                pts_r.append(rho)
                pts_e.append(err)
        slopes[r] = fit_slope(pts_r, pts_e)
    return slopes


def check_decay() -> CheckResult:
    slopes = decay_slopes()
    ok = all(s <= -(r - 0.25) for r, s in slopes.items())
    return CheckResult("", ok, ", ".join(f"r={r}: slope {s:.3f} (need <= {-(r - 0.25):.2f})"
                                         for r, s in slopes.items()), data={"slopes": slopes})


def check_alternative_vs_adapted(slack: float = 1e-9) -> CheckResult:
    notes = []
    ok = True
    rhos = (2, 4, 8, 16, 32)
    rng = np.random.default_rng(9)
    for eta in (6, 12):
        consts = []
        for rho in rhos:
            plan2 = DecimationPlan.from_eta(2, eta, rho)
            spec = FrameSpec.from_eigen([1], [1], plan2.m)
            frame = build_ugf(spec)
            a2 = adapted(plan2, frame)
            b2 = alternative(plan2, frame)
            if np.max(np.abs(a2.A - b2.A)) <= 1e-6:
                ok = False
                notes.append(f"r=2 operators coincide at eta={eta}, rho={rho}")
            Hm = delta_pow(plan2.m, 2).astype(float)
            chain = col_norm_sum(b2.F @ Hm)
            consts.append(chain * rho**2)
            for _ in range(5):
                x = np.array([1.0 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())])
                quant = sigma_delta(frame.phi @ x, 2, E1_ALPHABET)
                rep_a = bound_report(x, spec, plan2, quant, a2)
                err_b = float(np.linalg.norm(x - b2.F @ quant.q))
                if rep_a.err > rep_a.bound + slack or err_b > chain * quant.u_inf + slack:
                    ok = False
                    notes.append(f"bound violated at eta={eta}, rho={rho}")
        # the alternative constant rho^2 ||F delta^2||_{inf,2} must stay flat as rho grows
        if max(consts) > 1.5 * min(consts):
            ok = False
            notes.append(f"alternative constant drifts: {consts}")
        notes.append(f"eta={eta}: alt rho^2*||F D^2|| in [{min(consts):.3f}, {max(consts):.3f}]")
    eq = check_alternative_r1_equal()
    ok = ok and eq.passed
    return CheckResult("", ok, "r=1 equal: " + str(eq.passed) + "; " + "; ".join(notes))


QUICK = {
    "twist_scale": check_twist_scale,
    "alt_vs_ada_identity": check_alt_vs_ada,
    "delta_family": check_delta_family,
    "recursivity": check_recursivity,
    "alternative_r1_equal": check_alternative_r1_equal,
}


def verify(level: str = "full", dbar=dbar_rho) -> list[CheckResult]:
    """Run the named checks; ``level='quick'`` restricts to integer-exact ones.

    The bit-rate law with its printed constant is not part of this list; see
    :func:`check_bitrate_law`, which the acceptance suite runs separately.
    """
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    results = [
        _timed("twist_scale", check_twist_scale, dbar),
        _timed("alt_vs_ada_identity", check_alt_vs_ada, dbar),
        _timed("delta_family", check_delta_family),
        _timed("recursivity", check_recursivity),
        _timed("alternative_r1_equal", check_alternative_r1_equal),
    ]
    if level == "quick":
        return results
    results += [
        _timed("factor_lemmas", check_factor_lemmas),
        _timed("lower_frame_bound", check_frame_bounds),
        _timed("variation_bound", check_variation),
        _timed("stability", check_stability),
        _timed("decay_order", check_decay),
        _timed("alternative_vs_adapted", check_alternative_vs_adapted),
    ]
    t0 = time.perf_counter()
    runs = randomized_runs()
    dt = time.perf_counter() - t0
    for name, fn in (
        ("error_bound", check_error_bound),
        ("codec", check_codec),
        ("bitrate_law_rederived", check_bitrate_law_rederived),
    ):
        res = _timed(name, fn, runs)
        res.seconds += dt if name == "error_bound" else 0.0
        results.append(res)
    return results
