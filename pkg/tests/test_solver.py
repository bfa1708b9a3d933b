import math
import os
from dataclasses import replace

import numpy as np
import pytest

from vmi2stro import (
    Config,
    CostLedger,
    OracleHandle,
    SeedStream,
    SolverConfig,
    Strategy,
    Outcome,
    update_rule,
    run,
)
from vmi2stro.solver import initial_state, iterate, vmi_choose_design_set, _variance_radius
from vmi2stro.problems import HimmelblauProblem, NoiseSpec, SphereProblem, QaoaProblem, cycle_graph, HIMMELBLAU_MINIMIZER
from vmi2stro.sampling import calibrate_kappa
from vmi2stro.history import EvaluatedPoint

from .conftest import ConstantProblem


def _table_config():
    return SolverConfig(eta_1=0.1, eta_2=0.5, theta=0.01, mu=100.0)


def test_update_rule_very_successful():
    config = _table_config()
    decision = update_rule(1.0, 0.6, 0.0, 1.0, 0.5, config)
    assert decision.outcome == Outcome.VERY_SUCCESSFUL
    assert decision.delta == pytest.approx(min(config.gamma_1 * 0.5, config.delta_max))


def test_update_rule_successful_keeps_radius():
    decision = update_rule(1.0, 0.2, 0.0, 1.0, 0.5, _table_config())
    assert decision.outcome == Outcome.SUCCESSFUL
    assert decision.delta == 0.5


def test_update_rule_direct_search_is_tested_first():
    decision = update_rule(1.0, 0.6, 0.7, 1.0, 0.5, _table_config())
    assert decision.outcome == Outcome.DIRECT_SEARCH
    assert decision.outcome.accepted
    assert decision.delta > 0.5


def test_update_rule_unsuccessful():
    config = _table_config()
    decision = update_rule(1.0, -0.1, -0.2, 1.0, 0.5, config)
    assert decision.outcome == Outcome.UNSUCCESSFUL
    assert not decision.outcome.accepted
    assert decision.delta == pytest.approx(config.gamma_2 * 0.5)


def test_update_rule_needs_certified_gradient():
    decision = update_rule(1.0, 0.9, 0.0, 0.001, 0.5, _table_config())
    assert decision.outcome == Outcome.UNSUCCESSFUL


@pytest.mark.parametrize("model_reduction", [0.0, -1.0])
def test_update_rule_rejects_zero_reduction(model_reduction):
    decision = update_rule(model_reduction, 0.0, 0.0, 10.0, 0.5, _table_config())
    assert decision.outcome == Outcome.UNSUCCESSFUL
    assert not decision.outcome.accepted


def test_delta_max_caps_expansion():
    config = SolverConfig(delta_0=1.0, delta_max=1.2)
    decision = update_rule(1.0, 1.0, 0.0, 10.0, 1.0, config)
    assert decision.delta == 1.2


def test_variance_radius_expansion():
    distances = np.array([0.0, 0.5, 1.5, 1.8, 3.0, 10.0])
    assert _variance_radius(distances, 5, 1.0, 2.0) == 4.0
    assert _variance_radius(distances, 2, 1.0, 2.0) == 1.0
    assert _variance_radius(distances[:4], 5, 1.0, 2.0) is None


def test_zero_budget_returns_start():
    result = run(HimmelblauProblem(), (-5.0, -5.0), SolverConfig(budget=0.0))
    assert result.trajectory == []
    assert np.array_equal(result.x_best, [-5.0, -5.0])
    assert math.isnan(result.f_best)


def test_budget_exhausted_in_first_iteration():
    oracle = OracleHandle(SphereProblem(), CostLedger())
    result = run(oracle, (5.0, 5.0), SolverConfig(budget=30.0))
    assert result.trajectory == []
    assert result.state.terminal
    assert oracle.ledger.total_cost <= 30.0


def test_first_iteration_uses_base_design():
    config = SolverConfig()
    state = initial_state(np.array([1.0, 1.0]), config, SeedStream(1))
    design, varmodel, x_v = vmi_choose_design_set(state, 1.0, config)
    assert design.is_stencil
    assert varmodel is None
    assert x_v is None


def test_noiseless_sphere_converges():
    oracle = OracleHandle(SphereProblem(), CostLedger())
    result = run(oracle, (5.0, 5.0), SolverConfig(budget=1.0e4), seed=3)
    assert np.linalg.norm(result.x_best) <= 1.0e-2
    assert oracle.ledger.total_cost <= 1.0e4
    estimates = [r.estimate for r in result.trajectory]
    assert all(b <= a for a, b in zip(estimates, estimates[1:]))
    assert result.trajectory[0].outcome.accepted


def test_constant_problem_is_unsuccessful():
    config = SolverConfig(delta_0=1.0, max_iterations=1)
    result = run(ConstantProblem(value=3.0), (0.0, 0.0), config)
    assert len(result.trajectory) == 1
    record = result.trajectory[0]
    assert record.outcome == Outcome.UNSUCCESSFUL
    assert record.delta == pytest.approx(config.gamma_2)
    assert np.array_equal(record.incumbent, [0.0, 0.0])


def test_iterate_updates_state():
    config = SolverConfig()
    oracle = OracleHandle(SphereProblem(), CostLedger())
    state = initial_state(np.array([5.0, 5.0]), config, SeedStream(0))
    state, decision = iterate(state, config, oracle)
    assert decision is not None
    assert state.k == 1
    assert len(state.trajectory) == 1
    assert state.delta == decision.delta
    assert state.trajectory[0].new_points == 6


@pytest.mark.parametrize("strategy", [Strategy.LAMBDA, Strategy.VARMODEL, Strategy.HYBRID])
def test_two_stage_communication_bound(strategy):
    oracle = OracleHandle(SphereProblem(noise=1.0), CostLedger(c_n=10.0, c_s=1.0))
    config = SolverConfig(strategy=strategy, budget=2.0e4)
    result = run(oracle, (2.0, 2.0), config, seed=11)
    assert len(result.trajectory) > 2
    assert any(r.variance_model for r in result.trajectory)
    for record in result.trajectory:
        assert record.iteration_communications <= 2 * record.new_points + record.reevaluations
    costs = [r.cost for r in result.trajectory]
    assert costs == sorted(costs)
    assert result.trajectory[-1].communications <= oracle.ledger.communications


def test_runs_are_reproducible():
    config = SolverConfig(budget=3000.0)
    results = []
    for _ in range(2):
        results.append(run(HimmelblauProblem(), (-5.0, -5.0), config, seed=SeedStream(9).replication(2)))
    a, b = results
    assert len(a.trajectory) == len(b.trajectory)
    for ra, rb in zip(a.trajectory, b.trajectory):
        assert np.array_equal(ra.incumbent, rb.incumbent)
        assert ra.estimate == rb.estimate
    assert np.array_equal(a.x_best, b.x_best)


def test_streaming_without_variance_model():
    config = SolverConfig(strategy=Strategy.STREAMING, variance_model=False, budget=2.0e4)
    result = run(HimmelblauProblem(), (-5.0, -5.0), config, seed=1)
    assert len(result.trajectory) > 0
    assert not any(r.variance_model for r in result.trajectory)



def test_calibrate_kappa_scales_to_start():
    oracle = OracleHandle(ConstantProblem(value=-3.0), CostLedger())
    point = EvaluatedPoint((1.0, 1.0))
    params = SolverConfig().sampling
    calibrated = calibrate_kappa(oracle, point, 2.0, params, SeedStream(4))
    assert calibrated.kappa == pytest.approx(0.75)
    assert point.count == params.lambda_k(0)
    assert point.iteration == -1
    assert oracle.ledger.communications == 1
    assert calibrate_kappa(oracle, point, 2.0, params, SeedStream(4)).kappa == pytest.approx(0.75)
    assert oracle.ledger.communications == 1


def test_calibrate_kappa_keeps_kappa_for_zero_start():
    oracle = OracleHandle(SphereProblem(), CostLedger())
    params = SolverConfig().sampling
    assert calibrate_kappa(oracle, EvaluatedPoint((0.0, 0.0)), 1.0, params, SeedStream(4)) == params


def test_calibrated_start_is_reevaluated_in_first_iteration():
    config = SolverConfig(delta_0=1.0, max_iterations=1)
    config = replace(config, sampling=replace(config.sampling, kappa_from_start=True))
    oracle = OracleHandle(ConstantProblem(value=3.0), CostLedger())
    result = run(oracle, (0.0, 0.0), config)
    record = result.trajectory[0]
    assert record.reevaluations == 1
    assert record.new_points == 4
    assert record.communications == oracle.ledger.communications


def _audit_runs(problem_factory, budget, c_n):
    for rep in range(20):
        root = SeedStream(77).replication(rep)
        problem = problem_factory()
        oracle = OracleHandle(problem, CostLedger(c_n=c_n, c_s=1.0))
        result = run(oracle, problem.default_x0(root), SolverConfig(budget=budget), seed=root)
        assert len(result.trajectory) > 0
        new_points = sum(r.new_points for r in result.trajectory)
        reevaluations = sum(r.reevaluations for r in result.trajectory)
        for record in result.trajectory:
            assert record.iteration_communications <= 2 * record.new_points + record.reevaluations
        assert result.trajectory[-1].communications <= 2 * new_points + reevaluations


def test_himmelblau_communications_per_point():
    _audit_runs(lambda: HimmelblauProblem(NoiseSpec(1.0)), 2.0e4, 0.0)


def test_qaoa_communications_per_point():
    _audit_runs(lambda: QaoaProblem(cycle_graph(5), 5), 1.0e4, 10.0)


def _far_start_config(variance_model):
    path = os.path.join(os.path.dirname(__file__), "..", "doc", "himmelblau-far-start.cfg")
    base = SolverConfig(strategy=Strategy.HYBRID, variance_model=variance_model, budget=3000.0)
    updated = Config().load_file(path).apply_to({ "solver": base, "sampling": base.sampling })
    return replace(updated["solver"], sampling=updated["sampling"]).validate()


def test_far_start_preset_loads():
    config = _far_start_config(True)
    assert config.delta_0 == pytest.approx(3.1623)
    assert config.delta_max == 50.0
    assert config.sampling.lambda_k(0) == 4
    assert config.sampling.lambda_k(500) == 4
    assert config.sampling.kappa_from_start
    assert config.variance_model


@pytest.mark.slow
def test_variance_model_finds_global_minimum_more_often():
    minimizer = np.array(HIMMELBLAU_MINIMIZER)
    fractions = []
    for variance_model in (True, False):
        config = _far_start_config(variance_model)
        hits = 0
        for rep in range(20):
            oracle = OracleHandle(HimmelblauProblem(NoiseSpec(1.0)), CostLedger(c_n=0.0, c_s=1.0))
            result = run(oracle, (-5.0, -5.0), config, seed=SeedStream(2024).replication(rep))
            assert oracle.ledger.total_cost <= 3000.0
            if np.linalg.norm(result.x_best - minimizer) <= 0.5:
                hits += 1
        fractions.append(hits / 20)
    with_model, without_model = fractions
    assert with_model - without_model >= 0.2
