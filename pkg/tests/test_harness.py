import math

import numpy as np
import pytest

from vmi2stro import ConfigError, SolverConfig, Strategy
from vmi2stro.constants import CSV_HEADER
from vmi2stro.harness import (
    ExperimentSpec,
    ProgressCurve,
    TracePoint,
    budget_grid,
    emit_csv,
    emit_trace_csv,
    progress_curve,
    read_csv,
    run_experiment,
    run_replication,
    solver_config_for,
    variance_gap_correlation,
    _step_values,
)


def _point(cost, estimate, true_value=0.0, gap=0.0, variance=0.0):
    return TracePoint(cost, np.zeros(2), estimate, true_value, variance, gap, 0, int(cost))


def test_zero_budget_gives_single_row(tmp_path):
    spec = ExperimentSpec(problem_id="himmelblau", solver_id="vmi3", budget=0.0, reps=1)
    result = run_experiment(spec)
    assert result.curve.grid.tolist() == [0.0]
    assert result.curve.true_value[0, 0] == 258.0
    assert math.isnan(result.curve.best_value[0, 0])
    path = tmp_path / "out.csv"
    emit_csv(result.curve, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 2
    assert lines[1].startswith("0.0,0,nan,258.0,258.0,0,0")


def test_identical_specs_give_identical_csv(tmp_path):
    spec = ExperimentSpec(problem_id="himmelblau", solver_id="vmi1", c_n=10.0, budget=3000.0, reps=2, seed=5, grid_points=25)
    paths = []
    for i in range(2):
        path = tmp_path / f"run{i}.csv"
        emit_csv(run_experiment(spec).curve, str(path))
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert len(paths[0].read_text().splitlines()) == 1 + 2 * 25


def test_parallel_replications_match_serial():
    spec = ExperimentSpec(problem_id="sphere", solver_id="vmi2", noise_scale=1.0, budget=2000.0, reps=3, seed=1, grid_points=10)
    serial = run_experiment(spec)
    parallel = run_experiment(spec, workers=2)
    np.testing.assert_array_equal(serial.curve.best_value, parallel.curve.best_value)
    np.testing.assert_array_equal(serial.curve.shots, parallel.curve.shots)


def test_csv_round_trip(tmp_path):
    spec = ExperimentSpec(problem_id="sphere", solver_id="astrodf", noise_scale=0.5, budget=1500.0, reps=2, grid_points=12)
    curve = run_experiment(spec).curve
    path = tmp_path / "curve.csv"
    emit_csv(curve, str(path))
    again = read_csv(str(path))
    np.testing.assert_allclose(again.grid, curve.grid, rtol=1e-12)
    np.testing.assert_allclose(again.best_value, curve.best_value, rtol=1e-12)
    np.testing.assert_allclose(again.true_value, curve.true_value, rtol=1e-12)
    np.testing.assert_allclose(again.gap, curve.gap, rtol=1e-12)
    np.testing.assert_array_equal(again.communications, curve.communications)
    np.testing.assert_array_equal(again.shots, curve.shots)


def test_read_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ConfigError):
        read_csv(str(path))


def test_step_values_are_right_continuous():
    trace = [
        _point(0.0, math.nan, true_value=9.0),
        _point(10.0, 5.0, true_value=4.0),
        _point(20.0, 7.0, true_value=6.0),
        _point(30.0, 3.0, true_value=2.0),
    ]
    best, true, _, _, shots = _step_values(trace, np.array([0.0, 5.0, 10.0, 25.0, 30.0, 40.0]))
    np.testing.assert_array_equal(best, [math.nan, math.nan, 5.0, 5.0, 3.0, 3.0])
    np.testing.assert_array_equal(true, [9.0, 9.0, 4.0, 4.0, 2.0, 2.0])
    np.testing.assert_array_equal(shots, [0, 0, 10, 20, 30, 30])


def test_confidence_interval():
    grid = np.array([0.0, 1.0])
    values = np.array([[1.0, 2.0], [3.0, 2.0]])
    ints = np.zeros((2, 2), dtype=np.int64)
    curve = ProgressCurve(grid, values, values, values, ints, ints)
    lo, hi = curve.confidence_interval()
    assert curve.mean().tolist() == [2.0, 2.0]
    assert lo == pytest.approx([2.0 - 1.96, 2.0])
    assert hi == pytest.approx([2.0 + 1.96, 2.0])


def test_budget_grid():
    assert budget_grid(0.0).tolist() == [0.0]
    grid = budget_grid(100.0, 5)
    assert grid.tolist() == [0.0, 25.0, 50.0, 75.0, 100.0]


def test_variance_gap_correlation():
    trace = [_point(i, 1.0, gap=g, variance=v) for i, (g, v) in enumerate([(4.0, 9.0), (3.0, 4.0), (1.0, 1.0), (0.5, 0.0)])]
    assert variance_gap_correlation(trace) == pytest.approx(1.0)
    assert math.isnan(variance_gap_correlation(trace[:2]))
    flat = [_point(i, 1.0, gap=float(i), variance=2.0) for i in range(4)]
    assert math.isnan(variance_gap_correlation(flat))


@pytest.mark.parametrize("solver_id", ["neldermead", "spsa", "astrodf", "vmi3"])
def test_every_solver_runs_under_the_harness(solver_id):
    spec = ExperimentSpec(problem_id="himmelblau", solver_id=solver_id, budget=2500.0, reps=1, grid_points=5)
    rep = run_replication(spec, 0)
    assert rep.trace[0].cost == 0.0
    costs = [p.cost for p in rep.trace]
    assert costs == sorted(costs)
    assert costs[-1] <= 2500.0
    assert rep.shots <= 2500
    assert math.isfinite(rep.true_value)


def test_qaoa_start_is_shared_across_solvers():
    starts = []
    for solver_id in ("vmi1", "astrodf"):
        spec = ExperimentSpec(problem_id="qaoa", solver_id=solver_id, depth=1, budget=0.0, reps=1, seed=3)
        starts.append(run_replication(spec, 0).trace[0].x)
    assert np.array_equal(starts[0], starts[1])


def test_emit_trace_csv(tmp_path):
    spec = ExperimentSpec(problem_id="himmelblau", solver_id="vmi3", budget=2000.0, reps=1)
    result = run_experiment(spec)
    path = tmp_path / "trace.csv"
    emit_trace_csv(result.replications, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "rep,cost,true_value,true_variance,delta"
    assert len(lines) == 1 + len(result.replications[0].trace)


def test_solver_ids_map_to_configurations():
    base = SolverConfig()
    assert solver_config_for("vmi1", base).strategy == Strategy.LAMBDA
    assert solver_config_for("vmi2", base).strategy == Strategy.VARMODEL
    assert solver_config_for("vmi3", base).variance_model
    astrodf = solver_config_for("astrodf", base)
    assert astrodf.strategy == Strategy.STREAMING
    assert not astrodf.variance_model
    with pytest.raises(ConfigError):
        solver_config_for("spsa", base)


@pytest.mark.parametrize("kwargs", [
    dict(solver_id="cobyla"),
    dict(problem_id="rosenbrock"),
    dict(c_n=0.0, c_s=0.0),
    dict(budget=math.inf),
    dict(reps=0),
])
def test_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        ExperimentSpec(**kwargs).validate()


@pytest.mark.slow
def test_hybrid_strategy_ranks_first_under_latency():
    terminal = {}
    for solver_id in ("vmi1", "vmi2", "vmi3"):
        spec = ExperimentSpec(problem_id="himmelblau", solver_id=solver_id, noise_scale=10.0,
                              c_n=1000.0, c_s=1.0, budget=2.0e5, reps=20, grid_points=10)
        terminal[solver_id] = run_experiment(spec).curve.mean("true_value")[-1]
    assert terminal["vmi3"] <= terminal["vmi2"]
    assert terminal["vmi3"] <= terminal["vmi1"]


@pytest.mark.slow
@pytest.mark.parametrize("c_n", [100.0, 1000.0])
def test_hybrid_beats_baselines_on_qaoa(c_n):
    gaps = {}
    for solver_id in ("vmi3", "neldermead", "spsa"):
        spec = ExperimentSpec(problem_id="qaoa", solver_id=solver_id, cycle_vertices=5, depth=5,
                              c_n=c_n, c_s=1.0, budget=5.0e5, reps=20, grid_points=10)
        gaps[solver_id] = run_experiment(spec).curve.mean("gap")[-1]
    assert gaps["vmi3"] <= gaps["neldermead"]
    assert gaps["vmi3"] <= gaps["spsa"]


@pytest.mark.slow
def test_gap_and_variance_decay_together():
    spec = ExperimentSpec(problem_id="qaoa", solver_id="vmi3", cycle_vertices=6, depth=10,
                          c_n=0.0, c_s=1.0, budget=2.0e4, reps=20, grid_points=10)
    result = run_experiment(spec)
    correlations = [variance_gap_correlation(r.trace) for r in result.replications]
    assert sum(1 for c in correlations if c > 0.5) >= 15
