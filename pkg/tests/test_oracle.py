import math

import pytest

from vmi2stro import (
    CostLedger,
    OracleHandle,
    SeedStream,
    BudgetExhaustedError,
    OracleArgumentError,
    OracleDomainError,
    total_cost,
    sample,
)
from vmi2stro.problems import HimmelblauProblem, NoiseSpec


@pytest.mark.parametrize("q_n,w_s,c_n,c_s,expected", [
    (2, 50, 1000.0, 1.0, 2050.0),
    (0, 0, 1000.0, 1.0, 0.0),
    (7, 3000, 0.0, 1.0, 3000.0),
])
def test_total_cost(q_n, w_s, c_n, c_s, expected):
    ledger = CostLedger(c_n, c_s)
    ledger.communications = q_n
    ledger.shots = w_s
    assert total_cost(ledger) == expected
    assert ledger.total_cost == expected


def test_ledger_counts_calls_and_shots():
    handle = OracleHandle(HimmelblauProblem(), CostLedger(c_n=10.0, c_s=1.0))
    root = SeedStream(1)
    for i, n in enumerate((5, 17, 1)):
        sample(handle, (0.0, 0.0), n, root.child(i))
    assert handle.ledger.communications == 3
    assert handle.ledger.shots == 23
    assert handle.ledger.total_cost == 53.0


def test_zero_variance_at_minimizer():
    handle = OracleHandle(HimmelblauProblem(NoiseSpec(10.0)))
    stats = handle.sample((3.0, 2.0), 100, SeedStream(5))
    assert stats.mean == 0.0
    assert stats.variance == 0.0


def test_same_stream_gives_identical_stats():
    handle = OracleHandle(HimmelblauProblem())
    stream = SeedStream(99).child("point", 3)
    assert handle.sample((0.5, -1.0), 50, stream) == handle.sample((0.5, -1.0), 50, stream)


def test_distinct_substreams_differ():
    handle = OracleHandle(HimmelblauProblem())
    root = SeedStream(99)
    assert handle.sample((0.5, -1.0), 50, root.child(1)) != handle.sample((0.5, -1.0), 50, root.child(2))


def test_himmelblau_moments_at_origin():
    handle = OracleHandle(HimmelblauProblem(NoiseSpec(10.0)))
    stats = handle.sample((0.0, 0.0), 100_000, SeedStream(2024))
    assert abs(stats.mean - 173.0) <= 5.0 * math.sqrt(60.0 / 100_000)
    assert stats.variance == pytest.approx(60.0, abs=3.0)


def test_argument_errors():
    handle = OracleHandle(HimmelblauProblem())
    with pytest.raises(OracleArgumentError):
        handle.sample((0.0, 0.0), 0, SeedStream(1))
    with pytest.raises(OracleDomainError):
        handle.sample((math.nan, 0.0), 10, SeedStream(1))
    with pytest.raises(OracleDomainError):
        handle.sample((0.0, 0.0, 0.0), 10, SeedStream(1))
    assert handle.ledger.communications == 0


def test_budget_is_enforced_without_charging():
    handle = OracleHandle(HimmelblauProblem(), CostLedger(c_n=10.0, c_s=1.0), budget=100.0)
    handle.sample((0.0, 0.0), 40, SeedStream(1))
    assert handle.remaining_budget == 50.0
    with pytest.raises(BudgetExhaustedError):
        handle.sample((0.0, 0.0), 41, SeedStream(1))
    assert handle.ledger.snapshot() == (1, 40)
    handle.sample((0.0, 0.0), 40, SeedStream(1))
    assert handle.ledger.total_cost == 100.0
