"""Experiment configuration, parameter sweeps and decay-rate fitting."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import codec
from .decimation import (
    bitrate_constant,
    bound_report,
    build,
    check_hypotheses,
    v_dual,
    beta_matrix,
)
from .errors import AdecError, ConfigError, InsufficientPoints
from .frames import FrameSpec, build_ugf, lower_frame_const
from .linalg import col_norm_sum, sigma_min_sq
from .operators import DecimationPlan, delta_pow
from .quantizer import Alphabet, sigma_delta, stability_margin


def parse_complex(value) -> complex:
    """Accept ``1.5``, ``[re, im]``, ``{"re": .., "im": ..}`` or ``"0.3+0.2j"``."""
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if isinstance(value, dict):
        return complex(value.get("re", 0.0), value.get("im", 0.0))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"cannot read a complex number from {value!r}")


def _complex_list(values) -> np.ndarray:
    return np.array([parse_complex(v) for v in values], dtype=np.complex128)


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass
class ExperimentConfig:
    eigenvalues: list[float]
    phi0: np.ndarray
    eigenvectors: np.ndarray | None = None
    r: list[int] = field(default_factory=lambda: [1])
    eta: list[int] = field(default_factory=lambda: [6])
    rho: list[int] = field(default_factory=lambda: [2, 4, 8, 16, 32])
    delta: float = 0.25
    L: int = 8
    x: np.ndarray | None = None       # explicit signal; otherwise drawn at random
    seed: int = 0
    trials: int = 1
    max_magnitude: float | None = None
    schemes: list = field(default_factory=lambda: ["adapted"])
    output: str | None = None
    parallelism: int = 1

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.delta, self.L)

    def frame_spec(self, m: int) -> FrameSpec:
        return FrameSpec.from_eigen(self.eigenvalues, self.phi0, m, self.eigenvectors)

    def grid(self) -> list[tuple[int, int, int]]:
        return [(r, eta, rho) for r in self.r for eta in self.eta for rho in self.rho]

    def signal_radius(self) -> float:
        """Radius of the signal ball that keeps every grid order stable."""
        if not self.r:
            return 0.0
        r_max = max(self.r)
        safe = self.L * self.delta - (2**r_max - 1) * self.delta / 2
        if safe <= 0:
            raise ConfigError(f"alphabet (L={self.L}, delta={self.delta}) cannot stabilise order {r_max}")
        radius = safe * (1 - 1e-9)
        if self.max_magnitude is not None:
            radius = min(radius, float(self.max_magnitude))
        return radius

    def signals(self) -> tuple[list[np.ndarray], float]:
        if self.x is not None:
            x = np.asarray(self.x, dtype=np.complex128)
            return [x], float(np.linalg.norm(x))
        radius = self.signal_radius()
        rng = np.random.default_rng(self.seed)
        out = []
        for _ in range(self.trials):
            g = rng.standard_normal(self.k) + 1j * rng.standard_normal(self.k)
            g /= np.linalg.norm(g)
            out.append(radius * rng.random() ** (1.0 / (2 * self.k)) * g)
        return out, radius

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ExperimentConfig":
        try:
            frame = doc["frame"]
            eig = [float(v) for v in frame["eigenvalues"]]
            phi0 = _complex_list(frame["phi0"]) if "phi0" in frame else np.ones(len(eig)) / math.sqrt(len(eig))
            vecs = frame.get("eigenvectors")
            vecs = None if vecs is None else np.array([[parse_complex(v) for v in row] for row in vecs])
            plan = doc.get("plan", {})
            alph = doc.get("alphabet", {})
            sig = doc.get("signal", {})
            schemes = doc.get("schemes", doc.get("scheme", ["adapted"]))
            cfg = cls(
                eigenvalues=eig,
                phi0=phi0,
                eigenvectors=vecs,
                r=[int(v) for v in _as_list(plan.get("r", [1]))],
                eta=[int(v) for v in _as_list(plan.get("eta", [6]))],
                rho=[int(v) for v in _as_list(plan.get("rho", [2, 4, 8, 16, 32]))],
                delta=float(alph.get("delta", 0.25)),
                L=int(alph.get("L", 8)),
                x=_complex_list(sig["x"]) if "x" in sig else None,
                seed=int(sig.get("seed", 0)),
                trials=int(sig.get("trials", 1)),
                max_magnitude=sig.get("max_magnitude"),
                schemes=_as_list(schemes),
                output=doc.get("output"),
                parallelism=int(doc.get("parallelism", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid experiment config: {exc}") from exc
        for s in cfg.schemes:
            scheme_name(s)
        if cfg.x is not None and cfg.x.size != cfg.k:
            raise ConfigError(f"signal has {cfg.x.size} entries, frame dimension is {cfg.k}")
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)


def scheme_name(scheme) -> str:
    if isinstance(scheme, dict) and "beta" in scheme:
        return f"beta({float(scheme['beta']):g})"
    if isinstance(scheme, str):
        if scheme in ("adapted", "alternative", "canonical"):
            return scheme
        if scheme.startswith("beta(") and scheme.endswith(")"):
            float(scheme[5:-1])
            return scheme
    raise ConfigError(f"unknown scheme {scheme!r}")


def _beta_of(scheme) -> float:
    return float(scheme["beta"]) if isinstance(scheme, dict) else float(scheme[5:-1])


@dataclass
class ExperimentRecord:
    k: int
    m: int
    rho: int
    eta: int
    r: int
    L: int
    delta: float
    scheme: str
    u_inf: float
    err: float
    err_bound: float
    lfb: float
    lfb_bound: float
    var: float
    var_bound: float
    bits_actual: int
    bits_formula: float
    overloaded: bool
    trial: int = 0
    radius: float = 0.0
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def bitrate_bound(self, c_phi0: float) -> float:
        return bitrate_constant(self.k, self.eta, c_phi0, self.L, self.r) * self.u_inf * 2.0 ** (
            -self.bits_formula / (2 * self.eta)
        )


COLUMNS = [f.name for f in fields(ExperimentRecord)]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for rec in records:
        w.writerow([_fmt(getattr(rec, c)) for c in COLUMNS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[ExperimentRecord]:
    out = []
    types = {f.name: f.type for f in fields(ExperimentRecord)}
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for name, raw in row.items():
            t = types[name]
            if t == "int":
                kw[name] = int(raw)
            elif t == "float":
                kw[name] = float(raw)
            elif t == "bool":
                kw[name] = raw in ("1", "True", "true")
            else:
                kw[name] = raw
        out.append(ExperimentRecord(**kw))
    return out


def _skipped(cfg: ExperimentConfig, r, eta, rho, scheme, trial, radius, reason) -> ExperimentRecord:
    nan = float("nan")
    return ExperimentRecord(
        k=cfg.k, m=eta * rho, rho=rho, eta=eta, r=r, L=cfg.L, delta=cfg.delta, scheme=scheme_name(scheme),
        u_inf=nan, err=nan, err_bound=nan, lfb=nan, lfb_bound=nan, var=nan, var_bound=nan,
        bits_actual=0, bits_formula=nan, overloaded=False, trial=trial, radius=radius,
        status=f"skipped: {reason}",
    )


def _envelope_width(scaled: np.ndarray, L: int) -> int:
    row = np.abs(scaled.astype(object) if scaled.dtype == object else scaled).sum(axis=1)
    peak = int(max(row)) * (2 * L - 1)
    return (2 * peak + 1).bit_length()


def run_point(cfg: ExperimentConfig, r: int, eta: int, rho: int, signals, radius) -> list[ExperimentRecord]:
    """All (scheme x trial) records for one grid point."""
    out: list[ExperimentRecord] = []
    try:
        plan = DecimationPlan.from_eta(r, eta, rho)
        spec = cfg.frame_spec(plan.m)
        frame = build_ugf(spec)
    except AdecError as exc:
        for scheme in cfg.schemes:
            for t in range(len(signals)):
                out.append(_skipped(cfg, r, eta, rho, scheme, t, radius, f"{type(exc).__name__}: {exc}"))
        return out
    alph = cfg.alphabet
    bits_formula = codec.bit_budget(plan, cfg.L)
    H = delta_pow(plan.m, r).astype(float)
    for scheme in cfg.schemes:
        name = scheme_name(scheme)
        try:
            if name in ("adapted", "alternative"):
                ops = build(name, plan, frame)
                F = ops.F
            elif name == "canonical":
                ops = None
                F = v_dual(np.eye(plan.m), frame.phi)
            else:
                ops = None
                V = beta_matrix(_beta_of(scheme), spec.k, plan.m)
                F = v_dual(V, frame.phi)
        except AdecError as exc:
            for t in range(len(signals)):
                out.append(_skipped(cfg, r, eta, rho, scheme, t, radius, f"{type(exc).__name__}: {exc}"))
            continue
        for t, x in enumerate(signals):
            y = frame.phi @ x
            quant = sigma_delta(y, r, alph)
            if quant.overloaded:
                out.append(_skipped(cfg, r, eta, rho, scheme, t, radius, "OverloadedInput"))
                continue
            if ops is not None:
                rep = bound_report(x, spec, plan, quant, ops)
                if name == "adapted":
                    bits_actual = codec.encode(quant, plan).payload_bits
                    err_bound = rep.bound
                else:
                    bits_actual = 2 * plan.eta * _envelope_width(ops.scaled, cfg.L)
                    err_bound = rep.bound if r == 1 else rep.chain_bound
                rec = ExperimentRecord(
                    k=spec.k, m=plan.m, rho=rho, eta=eta, r=r, L=cfg.L, delta=cfg.delta, scheme=name,
                    u_inf=rep.u_inf, err=rep.err, err_bound=err_bound, lfb=rep.lfb, lfb_bound=rep.lfb_bound,
                    var=rep.var, var_bound=rep.var_bound, bits_actual=bits_actual, bits_formula=bits_formula,
                    overloaded=False, trial=t, radius=radius,
                )
            else:
                err = float(np.linalg.norm(x - F @ quant.q))
                var = col_norm_sum(F @ H)
                VPhi = frame.phi if name == "canonical" else beta_matrix(_beta_of(scheme), spec.k, plan.m) @ frame.phi
                lfb = sigma_min_sq(VPhi)
                raw_bits = 2 * plan.m * max(1, math.ceil(math.log2(2 * cfg.L)))
                rec = ExperimentRecord(
                    k=spec.k, m=plan.m, rho=rho, eta=eta, r=r, L=cfg.L, delta=cfg.delta, scheme=name,
                    u_inf=quant.u_inf, err=err, err_bound=var * quant.u_inf, lfb=lfb, lfb_bound=0.0,
                    var=var, var_bound=var, bits_actual=raw_bits, bits_formula=2 * plan.m * math.log2(2 * cfg.L),
                    overloaded=False, trial=t, radius=radius,
                )
            out.append(rec)
    return out


def _run_point_star(args):
    return run_point(*args)


def run_sweep(cfg: ExperimentConfig, output=None) -> list[ExperimentRecord]:
    """Evaluate every grid point; rows come back in grid order whatever the parallelism."""
    signals, radius = cfg.signals()
    jobs = [(cfg, r, eta, rho, signals, radius) for r, eta, rho in cfg.grid()]
    if cfg.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            chunks = list(pool.map(_run_point_star, jobs))
    else:
        chunks = [_run_point_star(j) for j in jobs]
    records = [rec for chunk in chunks for rec in chunk]
    path = output if output is not None else cfg.output
    if path:
        Path(path).write_text(records_to_csv(records))
    return records


def fit_slope(rhos, errs) -> float:
    """Least-squares slope of ``log2(err)`` against ``log2(rho)``."""
    rhos = np.asarray(rhos, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if np.unique(rhos).size < 3:
        raise InsufficientPoints(f"need at least 3 distinct block sizes, got {np.unique(rhos).size}")
    X = np.log2(rhos)
    Y = np.log2(errs)
    Xc = X - X.mean()
    return float(np.dot(Xc, Y - Y.mean()) / np.dot(Xc, Xc))


def fit_decay(records: Iterable[ExperimentRecord]) -> dict[tuple[str, int, int, int], float]:
    """Decay slope per ``(scheme, k, eta, r)`` group, over all successful rows."""
    groups: dict[tuple[str, int, int, int], tuple[list, list]] = {}
    for rec in records:
        if not rec.ok or not rec.err > 0:
            continue
        key = (rec.scheme, rec.k, rec.eta, rec.r)
        groups.setdefault(key, ([], []))
        groups[key][0].append(rec.rho)
        groups[key][1].append(rec.err)
    return {key: fit_slope(rh, er) for key, (rh, er) in groups.items()}


def summarize(records: list[ExperimentRecord], cfg: ExperimentConfig) -> dict[str, Any]:
    """JSON-ready summary: per-check verdicts, slope per group and the largest bound slack."""
    ok = [r for r in records if r.ok]
    checks = {
        "error_bound": all(r.err <= r.err_bound + 1e-9 for r in ok),
        "lower_frame_bound": all(r.lfb >= r.lfb_bound - 1e-9 for r in ok),
        "variation_bound": all(r.var <= r.var_bound + 1e-9 for r in ok),
    }
    try:
        c_phi0 = lower_frame_const(cfg.frame_spec(max(1, cfg.eta[0] if cfg.eta else 1)))
    except AdecError:
        c_phi0 = None
    adapted = [r for r in ok if r.scheme == "adapted"]
    if c_phi0 is not None and adapted:
        checks["bitrate_law"] = all(r.err <= r.bitrate_bound(c_phi0) + 1e-12 for r in adapted)
        checks["bit_budget"] = all(r.bits_actual <= r.bits_formula + 4 * r.eta for r in adapted)
    try:
        slopes = {f"{s}:k={k}:eta={e}:r={r}": v for (s, k, e, r), v in fit_decay(records).items()}
    except InsufficientPoints:
        slopes = {}
    slack = [r.err / r.err_bound for r in ok if r.err_bound > 0]
    return {
        "checks": checks,
        "slopes": slopes,
        "max_bound_ratio": max(slack) if slack else None,
        "rows": len(records),
        "skipped": sum(1 for r in records if not r.ok),
    }


def write_svg(records: list[ExperimentRecord], path, width: int = 480, height: int = 320) -> None:
    """Static log-log plot of error against block size, one polyline per group."""
    groups: dict[str, dict[int, list[float]]] = {}
    for rec in records:
        if rec.ok and rec.err > 0:
            groups.setdefault(f"{rec.scheme} r={rec.r} eta={rec.eta}", {}).setdefault(rec.rho, []).append(rec.err)
    pts = {g: sorted((rho, float(np.mean(v))) for rho, v in d.items()) for g, d in groups.items()}
    allx = [math.log2(p[0]) for v in pts.values() for p in v] or [0.0, 1.0]
    ally = [math.log2(p[1]) for v in pts.values() for p in v] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx) if max(allx) > min(allx) else min(allx) + 1
    y0, y1 = min(ally), max(ally) if max(ally) > min(ally) else min(ally) + 1
    pad = 40

    def sx(v):
        return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">log2(rho)</text>',
        f'<text x="12" y="{height / 2}" font-size="12" transform="rotate(-90 12 {height / 2})">log2(err)</text>',
    ]
    for i, (g, p) in enumerate(sorted(pts.items())):
        c = colors[i % len(colors)]
        poly = " ".join(f"{sx(math.log2(a)):.1f},{sy(math.log2(b)):.1f}" for a, b in p)
        lines.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{poly}"/>')
        lines.append(f'<text x="{pad + 4}" y="{pad + 14 * i}" font-size="11" fill="{c}">{g}</text>')
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")


def record_dict(rec: ExperimentRecord) -> dict[str, Any]:
    return asdict(rec)
