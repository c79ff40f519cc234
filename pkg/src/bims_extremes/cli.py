"""Command-line interface.

Exit codes: 0 ok, 1 failed verification, 2 usage or parse error,
3 invalid channel, 4 infeasible synthesis request.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import verify
from .channel import BimsChannel, capacity
from .errors import FOutOfRange, Infeasible, InvalidChannel, RhoOutOfRange, SpecError
from .exponents import EXPONENTS, exponent_envelope
from .extremes import bsec_capacity, c_envelope_at_z, f_bec_of_c, f_bsc_of_c, f_bsec, synthesize_bsec
from .gallager import bhattacharyya, report

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CHANNEL, EXIT_INFEASIBLE = 0, 1, 2, 3, 4
FIG1_RHOS = (-0.99, 1.0, 10.0)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    if isinstance(x, str):
        return x
    return f"{float(x):.12g}"


def unit_grid(step, top=1.0):
    """``0, step, 2 step, ..., top`` with the endpoint hit exactly."""
    if not step > 0:
        raise CliError(f"grid step must be positive, got {step}", EXIT_USAGE)
    n = max(1, int(round(top / step)))
    return np.linspace(0.0, top, n + 1)


def load_channel(path):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}", EXIT_USAGE) from exc
    try:
        if not isinstance(spec, dict):
            raise SpecError("channel spec must be a JSON object")
        return BimsChannel.from_spec(spec)
    except SpecError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    except InvalidChannel as exc:
        raise CliError(str(exc), EXIT_CHANNEL) from exc


def write_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_analyze(args):
    ch = load_channel(args.channel)
    rhos = args.rho or [0.5, 1.0, 2.0]
    return dump_json({"channel": ch.label, **report(ch, rhos).to_dict()})


def cmd_region(args):
    rhos = args.rho or list(FIG1_RHOS)
    Cs = unit_grid(args.c_step)
    rows = []
    for rho in rhos:
        fe, fb = f_bec_of_c(rho, Cs), f_bsc_of_c(rho, Cs)
        rows += [(rho, c, e, b) for c, e, b in zip(Cs, fe, fb)]
    return write_csv(["rho", "C", "f_bec", "f_bsc"], rows)


def cmd_exponents(args):
    ch = load_channel(args.channel)
    kinds = args.kind or ["random_coding"]
    for k in kinds:
        if k not in EXPONENTS:
            raise CliError(f"unknown exponent kind {k!r}; choose from {sorted(EXPONENTS)}", EXIT_USAGE)
    C = capacity(ch)
    rates = np.unique(np.append(unit_grid(args.r_step), C))
    header = ["R"]
    for k in kinds:
        header += [k, f"{k}_rho_star", f"{k}_flag", f"{k}_env_lower", f"{k}_env_upper"]

    def row(R):
        out = [R]
        for k in kinds:
            res = EXPONENTS[k](ch, R)
            env = exponent_envelope(k, C, R)
            out += [res.value, res.rho_star, res.at_boundary, env.lower, env.upper]
        return out

    return write_csv(header, verify.parallel_map(row, rates))


def cmd_synthesize(args):
    rho = args.rho[-1] if args.rho else 1.0
    try:
        p = synthesize_bsec(args.capacity, args.f, rho)
    except Infeasible as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE) from exc
    return dump_json({
        "eps_s": p.eps_s,
        "eps_e": p.eps_e,
        "rho": rho,
        "capacity": bsec_capacity(p.eps_s, p.eps_e),
        "f": f_bsec(rho, p.eps_s, p.eps_e),
    })


def cmd_dispersion(args):
    Cs = unit_grid(args.c_step)
    rows = verify.parallel_map(lambda c: (c, *verify.dispersion_envelope(c)), Cs)
    return write_csv(["C", "v_bec", "v_bsc"], rows)


def cmd_c_vs_z(args):
    rows = []
    for z in unit_grid(args.z_step):
        env = c_envelope_at_z(z)
        rows.append(("band", z, env.lower, env.upper, ""))
    for snr in args.snr or []:
        ch = BimsChannel.biawgn(snr)
        z = min(bhattacharyya(ch), 1.0)
        env = c_envelope_at_z(z)
        rows.append((f"biawgn:{snr:g}dB", z, env.lower, env.upper, capacity(ch)))
    return write_csv(["label", "Z", "c_bec", "c_bsc", "c_channel"], rows)


def cmd_verify(args):
    if args.replay:
        case = json.loads(args.replay)
        v = verify.replay(args.check, case)
        return dump_json({"check": args.check, "worst_case": case, "violation": v})
    names = None if args.check == "all" else [args.check]
    if names and names[0] not in verify.CHECKS:
        raise CliError(f"unknown check {args.check!r}; choose from all, {', '.join(verify.CHECKS)}", EXIT_USAGE)
    reports = verify.run(names, seed=args.seed, trials=args.trials)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: trials={r.trials} max_violation={r.max_violation:.3e} "
              f"tol={r.tolerance:g}", file=sys.stderr)
    args.failed = not all(r.passed for r in reports)
    return dump_json({"seed": args.seed, "checks": [r.to_dict() for r in reports]})


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bims-extremes",
        description="Gallager E0-family quantities and their BEC/BSC extremes at fixed capacity.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rho", type=float, action="append", help="rho value (repeatable)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="capacity, E0, Z, R0, dispersion as JSON")
    p.add_argument("channel", help="channel spec JSON file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("region", parents=[common], help="feasible (C, F(rho)) band as CSV")
    p.add_argument("--c-step", type=float, default=0.01)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("exponents", parents=[common], help="exponents of a channel vs. rate, with envelopes")
    p.add_argument("channel", help="channel spec JSON file")
    p.add_argument("--kind", action="append", help=f"one of {', '.join(EXPONENTS)} (repeatable)")
    p.add_argument("--r-step", type=float, default=0.01)
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("synthesize", parents=[common], help="BSEC with given capacity and F(rho)")
    p.add_argument("capacity", type=float)
    p.add_argument("f", type=float)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("dispersion", parents=[common], help="dispersion envelope vs. capacity as CSV")
    p.add_argument("--c-step", type=float, default=0.01)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("c-vs-z", parents=[common], help="capacity envelope vs. Bhattacharyya parameter as CSV")
    p.add_argument("--z-step", type=float, default=0.01)
    p.add_argument("--snr", type=float, action="append", help="add a BIAWGN channel at this SNR in dB")
    p.set_defaults(func=cmd_c_vs_z)

    p = sub.add_parser("verify", parents=[common], help="run theorem checks")
    p.add_argument("check", nargs="?", default="all", help=f"all or one of {', '.join(verify.CHECKS)}")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--replay", help="JSON worst_case object to recompute")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.failed = False
    try:
        text = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RhoOutOfRange, FOutOfRange, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAILED if args.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
