"""Command-line entry point: ``adec {sweep,verify,encode,decode,reconstruct,fit}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import codec, verification
from .decimation import adapted, bound_report
from .errors import AdecError, ConfigError
from .frames import build_ugf
from .harness import (
    ExperimentConfig,
    fit_decay,
    records_from_csv,
    records_to_csv,
    run_sweep,
    summarize,
    write_svg,
)
from .linalg import pinv
from .operators import DecimationPlan, dbar_rho
from .quantizer import sigma_delta

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _complex_json(z) -> list:
    return [[float(v.real), float(v.imag)] for v in np.atleast_1d(z)]


def _single_point(cfg: ExperimentConfig):
    """The first grid point and first signal of a config, for the one-shot subcommands."""
    if not cfg.grid():
        raise ConfigError("config has an empty (r, eta, rho) grid")
    r, eta, rho = cfg.grid()[0]
    plan = DecimationPlan.from_eta(r, eta, rho)
    signals, _ = cfg.signals()
    return plan, cfg.frame_spec(plan.m), signals[0]


def _flipped_dbar(m: int, rho: int) -> np.ndarray:
    return -dbar_rho(m, rho)


def cmd_sweep(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    records = run_sweep(cfg, output=args.output)
    if not (args.output or cfg.output):
        sys.stdout.write(records_to_csv(records))
    if args.svg:
        write_svg(records, args.svg)
    if args.summary:
        text = json.dumps(summarize(records, cfg), indent=2, sort_keys=True)
        if args.summary == "-":
            print(text)
        else:
            Path(args.summary).write_text(text + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    dbar = _flipped_dbar if args.flip_dbar else dbar_rho
    results = verification.verify(args.level, dbar=dbar)
    if args.json:
        doc = {r.name: {"passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 4)} for r in results}
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_encode(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    plan, spec, x = _single_point(cfg)
    frame = build_ugf(spec)
    quant = sigma_delta(frame.phi @ x, plan.r, cfg.alphabet)
    block = codec.encode(quant, plan)
    codec.write(args.output, block)
    print(json.dumps({"m": plan.m, "rho": plan.rho, "r": plan.r, "eta": plan.eta, "width": block.width,
                      "payload_bits": block.payload_bits, "overloaded": quant.overloaded}))
    return EXIT_OK


def cmd_decode(args) -> int:
    block = codec.read(args.file)
    samples, pairs = codec.decode(block)
    print(json.dumps({
        "m": block.m, "rho": block.rho, "r": block.r, "L": block.L, "delta": block.delta, "width": block.width,
        "numerators": [list(p) for p in pairs], "samples": _complex_json(samples),
    }, indent=2))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    plan, spec, x = _single_point(cfg)
    frame = build_ugf(spec)
    ops = adapted(plan, frame)
    quant = sigma_delta(frame.phi @ x, plan.r, cfg.alphabet)
    if args.input:
        block = codec.read(args.input)
        if (block.m, block.rho, block.r) != (plan.m, plan.rho, plan.r):
            raise ConfigError(f"stream (m={block.m}, rho={block.rho}, r={block.r}) does not match the config")
        samples, _ = codec.decode(block)
        # samples hold rho^r A q, so the dual acts after undoing the scale
        x_hat = pinv(ops.A_phi) @ (samples / ops.scale)
    else:
        x_hat = ops.F @ quant.q
    doc = {"x": _complex_json(x), "x_hat": _complex_json(x_hat), "err": float(np.linalg.norm(x - x_hat)),
           "overloaded": quant.overloaded}
    if not quant.overloaded:
        doc["err_bound"] = bound_report(x, spec, plan, quant, ops).bound
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        text = Path(args.csv).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.csv}: {exc}") from exc
    slopes = fit_decay(records_from_csv(text))
    print(json.dumps({f"{s}:k={k}:eta={e}:r={r}": v for (s, k, e, r), v in slopes.items()}, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="run an experiment grid and write CSV")
    s.add_argument("config")
    s.add_argument("-o", "--output", help="CSV path (default: config 'output', else stdout)")
    s.add_argument("--summary", metavar="PATH", help="write the JSON summary ('-' for stdout)")
    s.add_argument("--svg", metavar="PATH", help="write a static log-log plot of err against rho")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the identity and bound checks")
    v.add_argument("--level", choices=("quick", "full"), default="full")
    v.add_argument("--json", action="store_true")
    v.add_argument("--flip-dbar", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("encode", help="quantize the config's first point and write a bitstream")
    e.add_argument("config")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="print the decimated samples stored in a bitstream")
    d.add_argument("file")
    d.set_defaults(func=cmd_decode)

    r = sub.add_parser("reconstruct", help="reconstruct the config's first signal")
    r.add_argument("config")
    r.add_argument("--from", dest="input", metavar="FILE", help="reconstruct from an encoded bitstream")
    r.set_defaults(func=cmd_reconstruct)

    f = sub.add_parser("fit", help="fit decay slopes from a sweep CSV")
    f.add_argument("csv")
    f.set_defaults(func=cmd_fit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"adec: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AdecError as exc:
        print(f"adec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
