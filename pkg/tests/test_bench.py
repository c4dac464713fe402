"""Benchmark harness: records, method fallbacks, sweeps and serialization.

The LU reference anchors every rmse; the CG fallback chain is exercised on
positive definite, negative definite and non-Hermitian systems; emit/read
round-trips preserve every field including non-finite ones.
"""

import numpy as np
import pytest

from tnhhl.bench import (
    CSV_COLUMNS,
    RunRecord,
    SweepSpec,
    emit_results,
    read_records,
    rmse,
    run_experiment,
    run_sweep,
)
from tnhhl.exceptions import DomainError, ShapeError, TnhhlError
from tnhhl.linalg import lu_solve
from tnhhl.problems import build_forced_oscillator, build_heat2d
from tnhhl.solver import ClockParams
from tests.conftest import crandn, grid_aligned_hermitian


def test_rmse_hand_values():
    assert rmse(np.array([1.0, 1.0]), np.array([0.0, 0.0])) == 1.0
    assert np.isclose(rmse(np.array([3.0, 0.0]), np.array([0.0, 4.0])), np.sqrt(12.5))
    assert rmse(np.array([1j, -1j]), np.array([1j, -1j])) == 0.0
    with pytest.raises(ShapeError):
        rmse(np.ones(2), np.ones(3))


def test_run_experiment_records_lu_and_tn(rng):
    p = build_forced_oscillator(n=8)
    records = run_experiment(p, clock=256, methods=("tn_hhl", "lu"))
    by_method = {r.method: r for r in records}
    assert set(by_method) == {"tn_hhl", "lu"}
    lu = by_method["lu"]
    assert lu.rmse_vs_lu == 0.0
    assert lu.residual_rel <= 1e-12
    tn = by_method["tn_hhl"]
    assert tn.m == 256
    assert tn.t > 0
    assert tn.rmse_vs_lu < 0.1
    assert np.isfinite(tn.wall_seconds)
    assert tn.problem_label == p.label and tn.n == 8


def test_run_experiment_always_includes_lu(rng):
    p = build_forced_oscillator(n=6)
    records = run_experiment(p, clock=64, methods=("tn_hhl",))
    assert {r.method for r in records} == {"tn_hhl", "lu"}


def test_run_experiment_circuit_method(rng):
    m, t = 16, 0.9
    h, _ = grid_aligned_hermitian(2, m, t, rng)
    from tnhhl.problems import LinearProblem
    p = LinearProblem(h, crandn(2, rng), label="aligned_tiny")
    records = run_experiment(p, clock=ClockParams(m, t),
                             methods=("circuit", "lu"))
    circ = next(r for r in records if r.method == "circuit")
    x_lu = lu_solve(h, p.b)
    # Aligned spectrum: the rescaled circuit amplitudes reproduce LU.
    assert circ.rmse_vs_lu <= 1e-9 * np.max(np.abs(x_lu))
    assert circ.residual_rel <= 1e-8


def test_run_experiment_cg_on_heat2d(rng):
    # The heat matrix is negative definite, so CG runs on the negated
    # system; its solution must agree with LU to oracle precision.
    p = build_heat2d(nx=8, ny=8)
    records = run_experiment(p, methods=("cg", "lu"))
    cg = next(r for r in records if r.method == "cg")
    x_lu = lu_solve(p.a, p.b)
    assert cg.rmse_vs_lu <= 1e-7 * max(1.0, float(np.max(np.abs(x_lu))))
    assert cg.problem_label.endswith(":cg-negated")


def test_run_experiment_cg_non_hermitian_falls_back(rng):
    from tnhhl.problems import LinearProblem
    a = crandn((4, 4), rng) + 3 * np.eye(4)
    p = LinearProblem(a, crandn(4, rng), label="nonsym")
    records = run_experiment(p, methods=("cg",))
    cg = next(r for r in records if r.method == "cg")
    assert cg.problem_label.endswith(":cg-normal-eq")
    assert cg.rmse_vs_lu <= 1e-6


def test_run_experiment_rejects_unknown_method(rng):
    p = build_forced_oscillator(n=4)
    with pytest.raises(DomainError):
        run_experiment(p, methods=("gauss",))


def test_sweep_spec_validation():
    with pytest.raises(DomainError):
        SweepSpec(variable="k", values=[1, 2])
    with pytest.raises(DomainError):
        SweepSpec(variable="n", values=[4, 4])
    with pytest.raises(DomainError):
        SweepSpec(variable="n", values=[])
    with pytest.raises(DomainError):
        SweepSpec(variable="n", values=[2, 4], repetitions=0)
    with pytest.raises(DomainError):
        SweepSpec(variable="n", values=[2, 4], methods=())
    with pytest.raises(DomainError):
        SweepSpec(variable="n", values=[2, 4], methods=("newton",))


def test_run_sweep_oscillator_record_count():
    spec = SweepSpec(variable="n", values=[4, 8], fixed={"problem": "oscillator", "m": 64},
                     repetitions=2, methods=("tn_hhl", "lu"))
    result = run_sweep(spec)
    # 2 values x 2 repetitions x 2 methods.
    assert len(result.records) == 8
    assert all(r.m == 64 for r in result.records)
    assert set(result.slopes) <= {"tn_hhl", "lu"}


def test_run_sweep_m_variable_aligned_monotone_rmse():
    # For the aligned family every point is exact; sweep m over the clock
    # instead to confirm records carry the varying m.
    spec = SweepSpec(variable="m", values=[16, 32], fixed={"problem": "aligned", "n": 3},
                     methods=("tn_hhl", "lu"))
    result = run_sweep(spec)
    ms = sorted({r.m for r in result.records})
    assert ms == [16, 32]
    for r in result.records:
        if r.method == "tn_hhl":
            assert r.rmse_vs_lu <= 1e-8


def test_run_sweep_skips_points_with_singular_reference():
    # Odd-n forced oscillators at dt*dt == 2 have an exactly zero stencil
    # eigenvalue, so the LU anchor fails; the sweep warns and drops the
    # point instead of fabricating an rmse without a reference.
    spec = SweepSpec(variable="n", values=[3, 4],
                     fixed={"problem": "oscillator", "m": 32},
                     methods=("tn_hhl", "lu"))
    with pytest.warns(UserWarning, match="n=3"):
        result = run_sweep(spec)
    assert {r.n for r in result.records} == {4}


def test_run_sweep_m_refinement_improves_oscillator_rmse():
    spec = SweepSpec(variable="m", values=[256, 1024],
                     fixed={"problem": "oscillator", "n": 16},
                     methods=("tn_hhl", "lu"))
    result = run_sweep(spec)
    tn = sorted((r.m, r.rmse_vs_lu) for r in result.records if r.method == "tn_hhl")
    assert tn[1][1] < tn[0][1]


def test_emit_and_read_csv_round_trip(tmp_path):
    records = [
        RunRecord("p1", 4, 64, 1.25, "tn_hhl", 1e-3, 2e-3, 0.5, True),
        RunRecord("p1", 4, 64, 1.25, "lu", 0.0, 1e-16, 0.001, False),
        RunRecord("p2", 8, 64, float("nan"), "tn_hhl", float("nan"), float("nan"), 0.1, False),
    ]
    path = tmp_path / "out.csv"
    emit_results(records, format="csv", path=path)
    header = path.read_text().splitlines()[0]
    assert tuple(header.split(",")) == CSV_COLUMNS
    back = read_records(path)
    assert len(back) == 3
    assert back[0] == records[0]
    assert np.isnan(back[2].rmse_vs_lu) and np.isnan(back[2].t)


def test_emit_and_read_json_round_trip(tmp_path):
    records = [
        RunRecord("p1", 4, 64, 1.25, "tn_hhl", 1e-3, 2e-3, 0.5, False),
        RunRecord("p2", 8, 32, float("nan"), "cg", float("nan"), 1e-12, 0.2, False),
    ]
    path = tmp_path / "out.json"
    emit_results(records, format="json", path=path)
    # Non-finite values must serialize as JSON null, not bare NaN tokens.
    text = path.read_text()
    assert "NaN" not in text and "null" in text
    back = read_records(path)
    assert back[0] == records[0]
    assert np.isnan(back[1].rmse_vs_lu) and back[1].residual_rel == 1e-12


def test_emit_results_validates_format_and_path(tmp_path):
    records = [RunRecord("p", 2, 16, 1.0, "lu", 0.0, 0.0, 0.0, False)]
    with pytest.raises(DomainError):
        emit_results(records, format="xml", path=tmp_path / "x")
    with pytest.raises(DomainError):
        emit_results(records, format="csv", path=None)
    with pytest.raises(TnhhlError, match="no/such/dir"):
        emit_results(records, format="csv", path=tmp_path / "no/such/dir/x.csv")


def test_read_records_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(TnhhlError, match="header"):
        read_records(path)
