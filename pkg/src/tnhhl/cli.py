"""Command-line interface.

Subcommands: solve, invert, oscillator, damped, heat2d, circuit, bench.
Exit codes: 0 on success; 1 for usage errors (bad flags, missing or
malformed input files, inputs outside an operation's domain); 2 for
numerical failures while solving (singular matrix, non-convergence,
degenerate calibration or post-selection).

Outputs are deterministic: rerunning a subcommand with identical inputs
produces byte-identical files. Wall-clock timings therefore appear only in
the benchmark records, never in solve/plot reports.
"""

import argparse
import json
import sys

import numpy as np

from . import io as tnio
from .bench import SweepSpec, emit_results, run_sweep
from .circuit import simulate_full
from .exceptions import DomainError, ParseError, ShapeError, TnhhlError
from .linalg import lu_solve
from .problems import (
    DEFAULT_DT_DAMPED,
    DEFAULT_DT_FORCED,
    LinearProblem,
    build_damped_oscillator,
    build_forced_oscillator,
    build_heat2d,
)
from .solver import DEFAULT_CLOCK_M, ClockParams, TensorNetworkHHL, invert_matrix

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


def _add_clock_flags(p: argparse.ArgumentParser, default_m: int = DEFAULT_CLOCK_M):
    p.add_argument("--m", type=int, default=default_m,
                   help=f"clock dimension (eigenvalue bins), default {default_m}")
    p.add_argument("--t", type=float, default=None,
                   help="evolution time; omit for the automatic anti-aliasing choice")
    p.add_argument("--pos-fraction", type=float, default=0.5,
                   help="fraction of clock bins treated as positive eigenvalues")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tnhhl",
        description="Tensor-network HHL linear solver, qudit-circuit cross-check, "
                    "finite-difference experiments and benchmarks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="solve A x = b from matrix/vector files")
    p.add_argument("--matrix", required=True, help="matrix file (rows cols header)")
    p.add_argument("--rhs", required=True, help="right-hand-side vector file")
    p.add_argument("--out", required=True, help="solution vector file; a JSON report "
                                                "is written next to it as <out>.json")
    _add_clock_flags(p)

    p = sub.add_parser("invert", help="approximate inverse of a Hermitian matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", required=True, help="output matrix file")
    p.add_argument("--route", choices=("columns", "tensor"), default="columns")
    _add_clock_flags(p)

    p = sub.add_parser("oscillator", help="forced harmonic oscillator experiment")
    p.add_argument("--n", type=int, default=64, help="number of interior time steps")
    p.add_argument("--k-over-m", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=DEFAULT_DT_FORCED)
    p.add_argument("--force-amp", type=float, default=1.0, help="force amplitude C")
    p.add_argument("--force-freq", type=float, default=2.0, help="force frequency nu")
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--xT", type=float, default=0.0)
    p.add_argument("--out", required=True, help="plot table (index, coordinate, tn, lu)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_clock_flags(p)

    p = sub.add_parser("damped", help="forced damped oscillator experiment")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--gamma", type=float, default=0.2, help="damping coefficient")
    p.add_argument("--k-over-m", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=DEFAULT_DT_DAMPED)
    p.add_argument("--force-amp", type=float, default=1.0)
    p.add_argument("--force-freq", type=float, default=2.0)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--xT", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_clock_flags(p)

    p = sub.add_parser("heat2d", help="static 2-D heat equation experiment")
    p.add_argument("--nx", type=int, default=16, help="interior nodes along x")
    p.add_argument("--ny", type=int, default=16, help="interior nodes along y")
    p.add_argument("--lx", type=float, default=1.0)
    p.add_argument("--ly", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.0, help="thermal conductivity")
    p.add_argument("--source-amp", type=float, default=10.0)
    p.add_argument("--boundary", type=float, default=0.0,
                   help="Dirichlet value applied on all four edges")
    p.add_argument("--out", required=True, help="plot table (index, x, y, tn, lu)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_clock_flags(p)

    p = sub.add_parser("circuit", help="qudit-circuit simulation and TN cross-check")
    p.add_argument("--matrix", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--out", required=True, help="JSON proportionality report")
    _add_clock_flags(p, default_m=32)

    p = sub.add_parser("bench", help="run a sweep described by a JSON config")
    p.add_argument("--config", required=True, help="SweepSpec JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--methods", default=None,
                   help="comma-separated override of the config's methods")
    return parser


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _solve_report_payload(est: TensorNetworkHHL, report) -> dict:
    return {
        "m": int(est.m),
        "t": float(est.t_),
        "scale": [report.scale.real, report.scale.imag],
        "residual_rel": report.residual_rel,
        "aliasing_flag": report.aliasing_flag,
        "upper_block_leak": report.upper_block_leak,
    }


def _cmd_solve(args) -> int:
    a = tnio.parse_matrix_file(args.matrix)
    b = tnio.parse_vector_file(args.rhs)
    est = TensorNetworkHHL(m=args.m, t=args.t, pos_fraction=args.pos_fraction)
    report = est.fit(a).solve(b)
    tnio.write_vector_file(args.out, report.x)
    _write_json(str(args.out) + ".json", _solve_report_payload(est, report))
    return 0


def _cmd_invert(args) -> int:
    a = tnio.parse_matrix_file(args.matrix)
    if args.t is None:
        est = TensorNetworkHHL(m=args.m, pos_fraction=args.pos_fraction).fit(a)
        t = est.t_
    else:
        t = args.t
    inv = invert_matrix(a, ClockParams(args.m, t), route=args.route)
    tnio.write_matrix_file(args.out, inv)
    return 0


def _write_plot_table(path, format: str, header: list, rows: list) -> None:
    if format == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        payload = [dict(zip(header, row)) for row in rows]
        _write_json(path, payload)


def _run_experiment_subcommand(args, problem: LinearProblem, header, coords) -> int:
    est = TensorNetworkHHL(m=args.m, t=args.t, pos_fraction=args.pos_fraction)
    report = est.fit(problem.a).solve(problem.b)
    x_lu = lu_solve(problem.a, problem.b)
    rows = []
    for idx in range(problem.n):
        rows.append((idx + 1, *coords(idx), float(report.x[idx].real), float(x_lu[idx].real)))
    _write_plot_table(args.out, args.format, header, rows)
    _write_json(str(args.out) + ".json", _solve_report_payload(est, report))
    return 0


def _cmd_oscillator(args) -> int:
    problem = build_forced_oscillator(
        n=args.n, k_over_m=args.k_over_m, dt=args.dt, c=args.force_amp,
        nu=args.force_freq, x0=args.x0, xT=args.xT,
    )
    header = ["index", "coordinate", "tn_value", "lu_value"]
    return _run_experiment_subcommand(
        args, problem, header, lambda idx: (float((idx + 1) * args.dt),)
    )


def _cmd_damped(args) -> int:
    problem = build_damped_oscillator(
        n=args.n, gamma=args.gamma, k_over_m=args.k_over_m, dt=args.dt,
        c=args.force_amp, nu=args.force_freq, x0=args.x0, xT=args.xT,
    )
    header = ["index", "coordinate", "tn_value", "lu_value"]
    return _run_experiment_subcommand(
        args, problem, header, lambda idx: (float((idx + 1) * args.dt),)
    )


def _cmd_heat2d(args) -> int:
    problem = build_heat2d(
        nx=args.nx, ny=args.ny, lx=args.lx, ly=args.ly,
        kappa_thermal=args.kappa, source_amp=args.source_amp,
        boundary=args.boundary,
    )
    dx = problem.meta["dx"]
    ny = args.ny

    def coords(idx):
        j, k = divmod(idx, ny)
        return (float((j + 1) * dx), float((k + 1) * dx))

    header = ["index", "x", "y", "tn_value", "lu_value"]
    return _run_experiment_subcommand(args, problem, header, coords)


def _cmd_circuit(args) -> int:
    a = tnio.parse_matrix_file(args.matrix)
    b = tnio.parse_vector_file(args.rhs)
    problem = LinearProblem(a, b, label="cli_circuit")
    if args.t is None:
        est = TensorNetworkHHL(m=args.m).fit(a)
        t = est.t_
    else:
        t = args.t
    report = simulate_full(problem, ClockParams(args.m, t))
    payload = {
        "m": int(args.m),
        "t": float(t),
        "success_probability": report.success_probability,
        "proportionality_to_tn": [
            report.proportionality_to_tn.real,
            report.proportionality_to_tn.imag,
        ],
        "max_ratio_deviation": report.max_ratio_deviation,
        "solution_amplitudes": [[z.real, z.imag] for z in report.solution_amplitudes],
    }
    _write_json(args.out, payload)
    return 0


def _cmd_bench(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ParseError(f"{args.config}: config must be a JSON object")
    if args.methods is not None:
        cfg["methods"] = [s for s in args.methods.split(",") if s]
    known = {"variable", "values", "fixed", "repetitions", "methods"}
    unknown = set(cfg) - known
    if unknown:
        raise ParseError(f"{args.config}: unknown config keys {sorted(unknown)}")
    try:
        spec = SweepSpec(**cfg)
    except (TypeError, DomainError) as exc:
        raise ParseError(f"{args.config}: invalid sweep config: {exc}") from exc
    result = run_sweep(spec)
    emit_results(result.records, format=args.format, path=args.out)
    print(json.dumps({"slopes": result.slopes}))
    return 0


_HANDLERS = {
    "solve": _cmd_solve,
    "invert": _cmd_invert,
    "oscillator": _cmd_oscillator,
    "damped": _cmd_damped,
    "heat2d": _cmd_heat2d,
    "circuit": _cmd_circuit,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else USAGE_ERROR
    try:
        return _HANDLERS[args.subcommand](args)
    except (ParseError, ShapeError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except TnhhlError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
