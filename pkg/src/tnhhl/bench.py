"""Benchmark harness: run experiments, compare methods, emit results.

Each run produces one RunRecord per method with the RMSE against the LU
reference, the relative residual on the original system, and the wall
time. Records serialize to CSV (fixed column order, RFC 4180 quoting) and
JSON (array of objects with the same field names); floats are written with
17 significant digits so parsing the file back reproduces them exactly.
"""

import csv
import json
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import validation
from .circuit import simulate_full
from .exceptions import DomainError, ShapeError, TnhhlError
from .linalg import conjugate_gradient, hermitian_eigen, lu_solve, unitary_from_eigen
from .problems import LinearProblem, build_damped_oscillator, build_forced_oscillator, build_heat2d
from .solver import DEFAULT_CLOCK_M, ClockParams, TensorNetworkHHL

CSV_COLUMNS = (
    "problem_label", "n", "m", "t", "method",
    "rmse_vs_lu", "residual_rel", "wall_seconds", "aliasing_flag",
)

KNOWN_METHODS = ("tn_hhl", "lu", "cg", "circuit")


@dataclass
class RunRecord:
    """One (problem, method) measurement."""

    problem_label: str
    n: int
    m: int
    t: float
    method: str
    rmse_vs_lu: float
    residual_rel: float
    wall_seconds: float
    aliasing_flag: bool


@dataclass
class SweepSpec:
    """A family of runs varying n or m over strictly increasing values."""

    variable: str
    values: list
    fixed: dict = field(default_factory=dict)
    repetitions: int = 1
    methods: tuple = ("tn_hhl", "lu")

    def __post_init__(self):
        if self.variable not in ("n", "m"):
            raise DomainError(f"sweep variable must be 'n' or 'm', got {self.variable!r}")
        values = [int(v) for v in self.values]
        if len(values) == 0:
            raise DomainError("sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError(f"sweep values must be strictly increasing, got {values}")
        self.values = values
        if self.repetitions < 1:
            raise DomainError(f"repetitions must be >= 1, got {self.repetitions}")
        self.methods = tuple(self.methods)
        _check_methods(self.methods)


@dataclass
class SweepResult:
    """All records of a sweep plus the fitted log-log wall-time slope per
    method (informational: slopes need at least two successful points)."""

    records: list
    slopes: dict


def _check_methods(methods):
    if len(methods) == 0:
        raise DomainError("at least one method is required")
    unknown = [m for m in methods if m not in KNOWN_METHODS]
    if unknown:
        raise DomainError(f"unknown methods {unknown}; known: {list(KNOWN_METHODS)}")


def rmse(x, x_ref) -> float:
    """Root mean square error between two vectors of equal length."""
    x = validation.as_complex_vector(x, "x")
    x_ref = validation.as_complex_vector(x_ref, "x_ref")
    if x.shape != x_ref.shape:
        raise ShapeError(f"length mismatch: {x.shape[0]} vs {x_ref.shape[0]}")
    return float(np.sqrt(np.mean(np.abs(x - x_ref) ** 2)))


def _solve_cg_any(a: np.ndarray, b: np.ndarray):
    """CG with the standard fallbacks for matrices that are not HPD.

    Hermitian matrices are tried directly, then negated (covers negative
    definite operators like the discrete Laplacian); anything else goes
    through the normal equations. Returns (x, label_suffix)."""
    n = a.shape[0]
    if validation.is_hermitian(a):
        try:
            return conjugate_gradient(a, b, tol=1e-12, max_iter=50 * n).x, ""
        except DomainError:
            pass
        try:
            return conjugate_gradient(-a, -b, tol=1e-12, max_iter=50 * n).x, ":cg-negated"
        except DomainError:
            pass
    an = a.conj().T @ a
    bn = a.conj().T @ b
    return conjugate_gradient(an, bn, tol=1e-13, max_iter=200 * n).x, ":cg-normal-eq"


def run_experiment(problem: LinearProblem, clock=None,
                   methods=("tn_hhl", "lu")) -> list:
    """Run the requested methods on one problem.

    `clock` is a ClockParams, a bare int (clock dimension with automatic
    evolution time), or None (default dimension, automatic time). The LU
    reference always runs (and is always recorded) since every other
    method's rmse_vs_lu is measured against it. Per-method failures are
    recorded as NaN entries with a warning instead of aborting the batch.
    The m and t columns carry the effective clock shared by the
    clock-based methods; t is 0.0 when neither was requested nor given.
    """
    methods = tuple(methods)
    _check_methods(methods)
    if "lu" not in methods:
        methods = ("lu",) + methods
    a, b = problem.a, problem.b
    n = problem.n

    if clock is None:
        m_eff, t_eff = DEFAULT_CLOCK_M, None
    elif isinstance(clock, int):
        validation.check_clock(clock)
        m_eff, t_eff = clock, None
    else:
        m_eff, t_eff = clock.m, clock.t

    records = []

    t0 = time.perf_counter()
    x_lu = lu_solve(a, b)
    lu_wall = time.perf_counter() - t0
    b_norm = np.linalg.norm(b)
    lu_residual = float(np.linalg.norm(a @ x_lu - b) / b_norm) if b_norm > 0 else 0.0

    tn_report = None
    tn_wall = float("nan")
    if "tn_hhl" in methods or ("circuit" in methods and t_eff is None):
        est = TensorNetworkHHL(m=m_eff, t=t_eff)
        t0 = time.perf_counter()
        try:
            est.fit(a)
            tn_report = est.solve(b)
            tn_wall = time.perf_counter() - t0
            t_eff = est.t_
        except TnhhlError as exc:
            tn_wall = time.perf_counter() - t0
            warnings.warn(f"tn_hhl failed on {problem.label}: {exc}")

    if t_eff is None:
        t_eff = 0.0
    aliasing = bool(tn_report.aliasing_flag) if tn_report is not None else False

    for method in methods:
        if method == "lu":
            records.append(RunRecord(problem.label, n, m_eff, t_eff, "lu",
                                     0.0, lu_residual, lu_wall, False))
        elif method == "tn_hhl":
            if tn_report is None:
                records.append(RunRecord(problem.label, n, m_eff, t_eff, "tn_hhl",
                                         float("nan"), float("nan"), tn_wall, False))
            else:
                records.append(RunRecord(problem.label, n, m_eff, t_eff, "tn_hhl",
                                         rmse(tn_report.x, x_lu), tn_report.residual_rel,
                                         tn_wall, aliasing))
        elif method == "cg":
            t0 = time.perf_counter()
            try:
                x_cg, suffix = _solve_cg_any(a, b)
                wall = time.perf_counter() - t0
                res = float(np.linalg.norm(a @ x_cg - b) / b_norm) if b_norm > 0 else 0.0
                records.append(RunRecord(problem.label + suffix, n, m_eff, t_eff, "cg",
                                         rmse(x_cg, x_lu), res, wall, False))
            except TnhhlError as exc:
                wall = time.perf_counter() - t0
                warnings.warn(f"cg failed on {problem.label}: {exc}")
                records.append(RunRecord(problem.label, n, m_eff, t_eff, "cg",
                                         float("nan"), float("nan"), wall, False))
        elif method == "circuit":
            t0 = time.perf_counter()
            try:
                report = simulate_full(problem, ClockParams(m_eff, t_eff))
                amps = report.solution_amplitudes
                x_circ = amps[-n:]
                denom = np.vdot(x_circ, x_circ).real
                if denom > 0.0:
                    x_circ = x_circ * (np.vdot(x_circ, x_lu) / denom)
                wall = time.perf_counter() - t0
                res = float(np.linalg.norm(a @ x_circ - b) / b_norm) if b_norm > 0 else 0.0
                records.append(RunRecord(problem.label, n, m_eff, t_eff, "circuit",
                                         rmse(x_circ, x_lu), res, wall, aliasing))
            except TnhhlError as exc:
                wall = time.perf_counter() - t0
                warnings.warn(f"circuit failed on {problem.label}: {exc}")
                records.append(RunRecord(problem.label, n, m_eff, t_eff, "circuit",
                                         float("nan"), float("nan"), wall, False))
    return records


def _aligned_problem(n: int, m: int, t: float, seed) -> LinearProblem:
    """Random Hermitian system whose spectrum sits exactly on clock bins."""
    rng = np.random.default_rng(seed)
    half = max(1, m // 2 - 1)
    bins = rng.choice(np.arange(1, half + 1), size=min(n, half), replace=False)
    signs = rng.choice([-1, 1], size=bins.shape[0])
    lam = 2.0 * np.pi * (signs * bins) / (t * m)
    if bins.shape[0] < n:
        lam = np.concatenate([lam, np.full(n - bins.shape[0], lam[0])])
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    v = unitary_from_eigen(hermitian_eigen(g + g.conj().T), 1.0)
    a = (v * lam) @ v.conj().T
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return LinearProblem(a, b, label=f"aligned_n{n}_m{m}")


def _build_sweep_problem(kind: str, n: int, fixed: dict) -> LinearProblem:
    if kind == "oscillator":
        keys = ("k_over_m", "dt", "c", "nu", "x0", "xT")
        return build_forced_oscillator(n=n, **{k: fixed[k] for k in keys if k in fixed})
    if kind == "damped":
        keys = ("gamma", "k_over_m", "dt", "c", "nu", "x0", "xT")
        return build_damped_oscillator(n=n, **{k: fixed[k] for k in keys if k in fixed})
    if kind == "heat2d":
        keys = ("lx", "ly", "kappa_thermal", "source_amp", "boundary")
        return build_heat2d(nx=n, ny=n, **{k: fixed[k] for k in keys if k in fixed})
    raise DomainError(f"unknown sweep problem kind {kind!r}")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run a parameter sweep and fit wall-time scaling slopes.

    fixed["problem"] selects the family: 'oscillator', 'damped', 'heat2d'
    or 'aligned' (random Hermitian with grid-aligned spectrum, seeded by
    fixed["seed"] for reproducibility). An n-sweep varies the problem size
    (grid edge for heat2d); an m-sweep varies the clock dimension with
    fixed["n"] as the size.
    """
    kind = spec.fixed.get("problem", "oscillator")
    records = []
    for value in spec.values:
        for rep in range(spec.repetitions):
            if spec.variable == "n":
                n = value
                m = int(spec.fixed.get("m", DEFAULT_CLOCK_M))
            else:
                n = int(spec.fixed.get("n", 8))
                m = value
            t = spec.fixed.get("t")
            if kind == "aligned":
                t_al = float(t) if t is not None else 1.0
                problem = _aligned_problem(n, m, t_al, seed=(spec.fixed.get("seed", 0), value, rep))
                clock = ClockParams(m, t_al)
            else:
                problem = _build_sweep_problem(kind, n, spec.fixed)
                clock = ClockParams(m, float(t)) if t is not None else m
            try:
                records.extend(run_experiment(problem, clock=clock, methods=spec.methods))
            except TnhhlError as exc:
                warnings.warn(f"sweep point {spec.variable}={value} rep {rep} failed: {exc}")

    slopes = {}
    for method in spec.methods:
        points = {}
        for rec in records:
            if rec.method == method and np.isfinite(rec.wall_seconds):
                v = rec.n if spec.variable == "n" else rec.m
                points.setdefault(v, []).append(rec.wall_seconds)
        if len(points) >= 2:
            vals = sorted(points)
            mean_walls = [float(np.mean(points[v])) for v in vals]
            if all(w > 0 for w in mean_walls):
                slope = np.polyfit(np.log(vals), np.log(mean_walls), 1)[0]
                slopes[method] = float(slope)
    return SweepResult(records=records, slopes=slopes)


def _fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def emit_results(records, format: str = "csv", path=None) -> None:
    """Write records to path as CSV or JSON (schema documented above)."""
    if format not in ("csv", "json"):
        raise DomainError(f"format must be 'csv' or 'json', got {format!r}")
    if path is None:
        raise DomainError("an output path is required")
    rows = [asdict(r) for r in records]
    try:
        if format == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for row in rows:
                    writer.writerow([
                        row["problem_label"],
                        str(row["n"]),
                        str(row["m"]),
                        _fmt_float(row["t"]),
                        row["method"],
                        _fmt_float(row["rmse_vs_lu"]),
                        _fmt_float(row["residual_rel"]),
                        _fmt_float(row["wall_seconds"]),
                        "true" if row["aliasing_flag"] else "false",
                    ])
        else:
            for row in rows:
                for key in ("t", "rmse_vs_lu", "residual_rel", "wall_seconds"):
                    if not np.isfinite(row[key]):
                        row[key] = None
            with open(path, "w") as fh:
                json.dump(rows, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        raise TnhhlError(f"cannot write results to {path}: {exc}") from exc


def read_records(path, format: str | None = None) -> list:
    """Parse a results file written by emit_results back into RunRecords."""
    if format is None:
        format = "json" if str(path).endswith(".json") else "csv"
    try:
        if format == "csv":
            with open(path, newline="") as fh:
                reader = csv.reader(fh)
                header = next(reader)
                if tuple(header) != CSV_COLUMNS:
                    raise TnhhlError(f"unexpected CSV header in {path}: {header}")
                out = []
                for row in reader:
                    out.append(RunRecord(
                        problem_label=row[0], n=int(row[1]), m=int(row[2]),
                        t=float(row[3]), method=row[4], rmse_vs_lu=float(row[5]),
                        residual_rel=float(row[6]), wall_seconds=float(row[7]),
                        aliasing_flag=(row[8] == "true"),
                    ))
                return out
        with open(path) as fh:
            rows = json.load(fh)
        out = []
        for row in rows:
            for key in ("t", "rmse_vs_lu", "residual_rel", "wall_seconds"):
                if row[key] is None:
                    row[key] = float("nan")
            out.append(RunRecord(**row))
        return out
    except OSError as exc:
        raise TnhhlError(f"cannot read results from {path}: {exc}") from exc
