"""Command-line front end: sweeps and scenario tables as CSV or JSON.

All angles on the command line are given in units of pi (0.25 means
pi/4).  Output is deterministic: fixed row order, floats printed with 12
significant digits, no randomness anywhere (--seed is accepted for
interface stability only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .fock_field import (
    DEFAULT_TAIL_TOL,
    central_moments_direct,
    central_moments_recursive,
    make_coherent,
    make_number_state,
)
from .jc_channel import PulseSpec, QubitState, build_kraus
from .error_metrics import PULSE_MODES, error_report, landscape_asymptote, resolve_pulse
from .pulse_sequence import SequenceStep, compare_sequence_vs_single, run_sequence

SWEEP_COLUMNS = ["N", "P_exact", "P_asymptotic", "gea_banacloche",
                 "ozawa_bound", "delta", "vartheta_used"]

START_ANGLES = {
    "ground": 0.0,
    "excited": math.pi / 2,
    "plus": math.pi / 4,
    "threequarter": 3 * math.pi / 4,
}


class UsageError(Exception):
    pass


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _emit(args, columns, rows, meta_params, extra=None) -> None:
    """Write rows as CSV (default) or JSON to stdout or --out."""
    if args.format == "json":
        payload = {
            "meta": {
                "command": args.command,
                "params": {k: _json_value(v) for k, v in meta_params.items()},
                "version": __version__,
            },
            "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows],
        }
        if extra:
            payload.update({k: _json_value_tree(v) for k, v in extra.items()})
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_value_tree(value):
    if isinstance(value, dict):
        return {k: _json_value_tree(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_value_tree(v) for v in value]
    return _json_value(value)


def _positive(value: float, name: str) -> float:
    if not value > 0:
        raise UsageError(f"{name} must be positive, got {value}")
    return value


def cmd_sweep(args) -> None:
    n_min = _positive(args.n_min, "--n-min")
    n_max = _positive(args.n_max, "--n-max")
    if n_min > n_max:
        raise UsageError(f"--n-min {n_min} exceeds --n-max {n_max}")
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    if args.vartheta_mode == "explicit" and args.vartheta is None:
        raise UsageError("--vartheta-mode explicit requires --vartheta")

    if args.spacing == "log":
        grid = np.geomspace(n_min, n_max, args.points)
    else:
        grid = np.linspace(n_min, n_max, args.points)

    rows = []
    for n_mean in grid:
        report = error_report(args.theta0, args.theta, float(n_mean),
                              mode=args.vartheta_mode, vartheta=args.vartheta,
                              tail_tol=args.tail_tol)
        rows.append({
            "N": float(n_mean),
            "P_exact": report.exact,
            "P_asymptotic": report.asymptotic,
            "gea_banacloche": report.gea_banacloche,
            "ozawa_bound": report.ozawa_bound,
            "delta": report.delta,
            "vartheta_used": report.vartheta_used,
        })
    _emit(args, SWEEP_COLUMNS, rows, {
        "theta0": args.theta0 / math.pi, "theta": args.theta / math.pi,
        "n_min": n_min, "n_max": n_max, "points": args.points,
        "spacing": args.spacing, "vartheta_mode": args.vartheta_mode,
        "tail_tol": args.tail_tol,
    })


def cmd_table2(args) -> None:
    n_mean = args.n
    if n_mean < 100:
        raise UsageError(f"--n must be >= 100 for the coefficient table, got {n_mean}")
    rows = []
    for theta in (math.pi / 4, math.pi / 2):
        for theta0 in (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4):
            report = error_report(theta0, theta, n_mean, mode="quarter-pi",
                                  tail_tol=args.tail_tol)
            coeff = n_mean * landscape_asymptote(theta0 + theta / 2, theta, n_mean)
            scaled = n_mean * report.exact
            rows.append({
                "theta0": theta0 / math.pi,
                "theta": theta / math.pi,
                "N_times_P_exact": scaled,
                "paper_coefficient": coeff,
                "relative_deviation": abs(scaled - coeff) / coeff,
            })
    _emit(args, ["theta0", "theta", "N_times_P_exact", "paper_coefficient",
                 "relative_deviation"], rows,
          {"N": n_mean, "tail_tol": args.tail_tol})


def cmd_sequence(args) -> None:
    n_mean = _positive(args.n, "--n")
    theta0 = START_ANGLES[args.start]
    quarter = math.pi / 4
    steps = [SequenceStep(quarter, n_mean, PulseSpec(mode=args.mode)),
             SequenceStep(quarter, n_mean, PulseSpec(mode=args.mode))]
    report = run_sequence(QubitState.pure(theta0), steps, theta0=theta0,
                          tail_tol=args.tail_tol)
    comparison = compare_sequence_vs_single(math.pi / 2, theta0, n_mean,
                                            mode=args.mode, tail_tol=args.tail_tol)
    rows = []
    for i in range(len(steps)):
        rows.append({
            "step": i + 1,
            "target_angle": report.target_angles[i] / math.pi,
            "P_exact": report.per_step_error[i],
            "P_mixture": report.per_step_mixture[i],
            "P_asymptote": report.per_step_asymptote[i],
            "single_N": comparison.single_N,
            "single_2N": comparison.single_2N,
        })
    _emit(args, ["step", "target_angle", "P_exact", "P_mixture", "P_asymptote",
                 "single_N", "single_2N"], rows,
          {"start": args.start, "N": n_mean, "mode": args.mode,
           "tail_tol": args.tail_tol})


def cmd_landscape(args) -> None:
    n_mean = _positive(args.n, "--n")
    if not 0.0 <= args.theta <= math.pi:
        raise UsageError(f"--theta must lie in [0, 1] (units of pi), got {args.theta / math.pi}")
    if args.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {args.grid}")

    rows = []
    for midpoint in np.linspace(0.0, math.pi / 2, args.grid):
        theta0 = float(midpoint) - args.theta / 2
        report = error_report(theta0, args.theta, n_mean, mode="quarter-pi",
                              tail_tol=args.tail_tol)
        rows.append({
            "Phi": float(midpoint) / math.pi,
            "N_times_P_exact": n_mean * report.exact,
            "N_times_asymptote": n_mean * landscape_asymptote(float(midpoint), args.theta, n_mean),
        })
    exact = [row["N_times_P_exact"] for row in rows]
    argmax_phi = rows[exact.index(max(exact))]["Phi"]
    argmin_phi = rows[exact.index(min(exact))]["Phi"]
    summary = {"argmax_phi": argmax_phi, "argmin_phi": argmin_phi}
    if args.format == "json":
        _emit(args, ["Phi", "N_times_P_exact", "N_times_asymptote"], rows,
              {"theta": args.theta / math.pi, "N": n_mean, "grid": args.grid,
               "tail_tol": args.tail_tol},
              extra={"summary": summary})
    else:
        _emit(args, ["Phi", "N_times_P_exact", "N_times_asymptote"], rows,
              {"theta": args.theta / math.pi, "N": n_mean, "grid": args.grid,
               "tail_tol": args.tail_tol})
        # Keep the data stream parseable: the summary goes to stderr.
        print(f"# argmax_phi={_fmt(argmax_phi)} argmin_phi={_fmt(argmin_phi)} "
              "(units of pi)", file=sys.stderr)


def cmd_moments(args) -> None:
    n_mean = _positive(args.n, "--n")
    if args.k < 0:
        raise UsageError(f"--k must be >= 0, got {args.k}")
    field = make_coherent(n_mean, tail_tol=args.tail_tol)
    direct = central_moments_direct(field, args.k)
    recursive = central_moments_recursive(n_mean, args.k)
    rows = []
    for k in range(args.k + 1):
        rows.append({
            "k": k,
            "mu_direct": direct[k],
            "mu_recursive": recursive[k],
            "bound_1_over_N": 1.0 / n_mean,
        })
    _emit(args, ["k", "mu_direct", "mu_recursive", "bound_1_over_N"], rows,
          {"N": n_mean, "K": args.k, "tail_tol": args.tail_tol})


def cmd_kraus_dump(args) -> None:
    if (args.number is None) == (args.n is None):
        raise UsageError("provide exactly one of --n (coherent) or --number (Fock)")
    if args.kappa is None and args.vartheta is None:
        raise UsageError("provide --kappa or --vartheta")

    if args.number is not None:
        if args.number < 0:
            raise UsageError(f"--number must be >= 0, got {args.number}")
        field = make_number_state(args.number)
        if args.kappa is None:
            raise UsageError("number-state fields need an explicit --kappa")
        pulse = PulseSpec.from_kappa(args.kappa)
    else:
        n_mean = _positive(args.n, "--n")
        field = make_coherent(n_mean, phase=args.phi, tail_tol=args.tail_tol)
        if args.kappa is not None:
            pulse = PulseSpec.from_kappa(args.kappa, n_mean)
        else:
            pulse = resolve_pulse("explicit", n_mean, vartheta=args.vartheta)

    kraus = build_kraus(field, pulse)
    rows = kraus.to_json_rows()
    residual = kraus.completeness_residual()
    if args.format == "json":
        _emit(args, [], rows,
              {"kappa": kraus.pulse.kappa_for(field), "tail_tol": args.tail_tol},
              extra={"field": field.to_json_dict(),
                     "completeness_residual": residual})
    else:
        flat = []
        for row in rows:
            entry = {"n": row["n"]}
            for label, (re, im) in zip(("M00", "M01", "M10", "M11"), row["M"]):
                entry[f"{label}_re"] = re
                entry[f"{label}_im"] = im
            flat.append(entry)
        columns = ["n"] + [f"{m}_{p}" for m in ("M00", "M01", "M10", "M11")
                           for p in ("re", "im")]
        _emit(args, columns, flat,
              {"kappa": kraus.pulse.kappa_for(field), "tail_tol": args.tail_tol})
        print(f"# completeness_residual={_fmt(residual)}", file=sys.stderr)


def _pi_units(text: str) -> float:
    return float(text) * math.pi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL,
                        help="Poisson tail mass allowed by truncation (default 1e-12)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; the model is deterministic")

    parser = argparse.ArgumentParser(
        prog="jcpulse",
        description="Exact qubit-control error rates under finite-strength "
                    "quantized fields.  Angles are in units of pi.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    # Angle defaults below are given directly in radians because argparse
    # applies ``type`` only to strings coming from the command line.
    p = sub.add_parser("sweep", parents=[common],
                       help="error rate vs mean photon number")
    p.add_argument("--theta0", type=_pi_units, default=0.0)
    p.add_argument("--theta", type=_pi_units, default=math.pi / 4)
    p.add_argument("--n-min", type=float, default=10.0)
    p.add_argument("--n-max", type=float, default=1e4)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("--vartheta-mode", choices=PULSE_MODES, default="quarter-pi")
    p.add_argument("--vartheta", type=_pi_units, default=None,
                   help="half pulse area for --vartheta-mode explicit")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table2", parents=[common],
                       help="scaled errors of half and full flips vs start altitude")
    p.add_argument("--n", type=float, default=1e4)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("sequence", parents=[common],
                       help="two successive half rotations vs one full flip")
    p.add_argument("--start", choices=sorted(START_ANGLES), default="ground")
    p.add_argument("--n", type=float, default=1e4,
                   help="photon budget per pulse")
    p.add_argument("--mode", choices=PULSE_MODES, default="bias-free")
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("landscape", parents=[common],
                       help="error vs midpoint altitude for a fixed rotation")
    p.add_argument("--theta", type=_pi_units, default=math.pi / 2)
    p.add_argument("--n", type=float, default=1e4)
    p.add_argument("--grid", type=int, default=9)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("moments", parents=[common],
                       help="Poisson central moments, direct vs recursive")
    p.add_argument("--n", type=float, default=10.0)
    p.add_argument("--k", type=int, default=6)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("kraus-dump", parents=[common],
                       help="dump the Kraus operators of one pulse")
    p.add_argument("--n", type=float, default=None,
                   help="coherent field mean photon number")
    p.add_argument("--number", type=int, default=None,
                   help="Fock field photon number")
    p.add_argument("--phi", type=_pi_units, default=math.pi / 2,
                   help="coherent phase (units of pi, default 0.5)")
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--vartheta", type=_pi_units, default=None)
    p.set_defaults(func=cmd_kraus_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"jcpulse: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"jcpulse: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
