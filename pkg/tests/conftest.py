from typing import Dict, Optional

import pytest

from vmi2stro.exceptions import BudgetExhaustedError
from vmi2stro.oracle import OracleHandle, CostLedger
from vmi2stro.stats import RunningStats
from vmi2stro.streams import SeedStream
from vmi2stro.util import as_point, hash_point
from vmi2stro.problems.base import GaussianNoiseProblem


class ConstantVarianceOracle(OracleHandle):
    """Charges the ledger like a real oracle but returns statistics whose pooled
    sample variance at each point is exactly `variance`, whatever the call sizes."""

    variance: float
    value: float
    _seen: Dict[bytes, bool]

    def __init__(self, variance: float = 1.0, value: float = 0.0, dim: int = 2, budget: Optional[float] = None):
        super().__init__(ConstantProblem(dim, value), CostLedger(), budget)
        self.variance = variance
        self.value = value
        self._seen = {}

    def sample(self, x, n, stream):
        xp = as_point(x, self.dim)
        key = hash_point(xp)
        first = not self._seen.get(key, False)
        if not self.can_afford(n):
            raise BudgetExhaustedError(f"Request of {n} shots exceeds the remaining budget")
        self._seen[key] = True
        self.ledger.record(int(n))
        m2 = self.variance * (n - 1 if first else n)
        return RunningStats(count=int(n), mean=self.value, m2=m2)


class ConstantProblem(GaussianNoiseProblem):
    name = "constant"

    def __init__(self, dim: int = 2, value: float = 0.0, noise: float = 0.0):
        self.dim = dim
        self.value = value
        self.noise = noise

    def mean(self, x):
        return self.value

    def noise_variance(self, x):
        return self.noise


@pytest.fixture
def stream() -> SeedStream:
    return SeedStream(12345)


@pytest.fixture
def unit_oracle() -> ConstantVarianceOracle:
    return ConstantVarianceOracle(variance=1.0)
