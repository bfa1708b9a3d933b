#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""The stochastic oracle contract and the communication/shot cost ledger.

   A StochasticProblem knows how to draw F(x, xi) for a batch of shots. Solvers never
   call it directly; they go through an OracleHandle, which validates the request,
   charges the ledger one communication plus n shots, enforces the run budget, and
   returns only RunningStats.
"""

from typing import Optional, Tuple
from abc import ABC, abstractmethod

import logging
import math
import numpy as np

from .internal_types import FloatArray, PointLike
from .exceptions import OracleArgumentError, BudgetExhaustedError
from .stats import RunningStats
from .streams import SeedStream
from .util import as_point

logger = logging.getLogger(__name__)

class CostLedger:
  """Counts communications (Q_n) and shots (W_s) and prices them.

  The counters only ever increase. total_cost is c_n*Q_n + c_s*W_s.
  """
  communications: int
  shots: int
  c_n: float
  c_s: float

  def __init__(self, c_n: float=0.0, c_s: float=1.0):
    if c_n < 0 or c_s < 0:
      raise OracleArgumentError(f"Unit costs must be nonnegative, got c_n={c_n}, c_s={c_s}")
    self.communications = 0
    self.shots = 0
    self.c_n = float(c_n)
    self.c_s = float(c_s)

  def cost_of(self, shots: int, communications: int=1) -> float:
    """The cost a request of the given size would add"""
    return self.c_n * communications + self.c_s * shots

  def record(self, shots: int):
    """Charges one communication carrying shots shots"""
    self.communications += 1
    self.shots += shots

  @property
  def total_cost(self) -> float:
    return total_cost(self)

  def snapshot(self) -> Tuple[int, int]:
    return (self.communications, self.shots)

  def __repr__(self) -> str:
    return f"<CostLedger Q_n={self.communications} W_s={self.shots} c_n={self.c_n} c_s={self.c_s}>"

def total_cost(ledger: CostLedger) -> float:
  """c_n*Q_n + c_s*W_s"""
  return ledger.c_n * ledger.communications + ledger.c_s * ledger.shots

class StochasticProblem(ABC):
  """A stochastic objective F(x, xi) to be minimized in expectation.

  Subclasses implement draw_samples(). Problems whose mean is known in closed form also
  implement exact_mean() (and, where available, exact_variance()); these are used by the
  harness for reporting only, never by solvers.
  """
  name: str = "problem"
  dim: int = 0
  default_delta_0: float = 1.0

  @abstractmethod
  def draw_samples(self, x: FloatArray, n: int, rng: np.random.Generator) -> FloatArray:
    """Draws n independent realizations of F(x, xi). Internal to the oracle boundary."""
    ...

  @property
  def has_exact_mean(self) -> bool:
    return False

  def exact_mean(self, x: FloatArray) -> float:
    raise NotImplementedError(f"{self.name} has no exact mean")

  def exact_variance(self, x: FloatArray) -> float:
    raise NotImplementedError(f"{self.name} has no exact variance")

  @property
  def optimal_value(self) -> Optional[float]:
    """The known minimum of the mean function, if any"""
    return None

  def default_x0(self, stream: SeedStream) -> FloatArray:
    return np.zeros(self.dim)

  def sample(self, x: PointLike, n: int, stream: SeedStream) -> RunningStats:
    """Statistics of n draws at x using stream. Does not touch any ledger."""
    xp = as_point(x, self.dim)
    if n < 1:
      raise OracleArgumentError(f"Shot count must be at least 1, got {n}")
    draws = self.draw_samples(xp, int(n), stream.generator())
    return RunningStats.from_samples(draws)

class OracleHandle:
  """A problem bound to a run's ledger and (optionally) its cost budget.

  Every successful sample() call increments Q_n by exactly 1 and W_s by exactly n.
  A call that would push the total cost past the budget raises BudgetExhaustedError
  without charging anything.
  """
  problem: StochasticProblem
  ledger: CostLedger
  budget: Optional[float]

  def __init__(self, problem: StochasticProblem, ledger: Optional[CostLedger]=None, budget: Optional[float]=None):
    self.problem = problem
    self.ledger = CostLedger() if ledger is None else ledger
    self.budget = budget

  @property
  def dim(self) -> int:
    return self.problem.dim

  @property
  def has_exact_mean(self) -> bool:
    return self.problem.has_exact_mean

  @property
  def remaining_budget(self) -> float:
    if self.budget is None:
      return math.inf
    return self.budget - self.ledger.total_cost

  def can_afford(self, n: int) -> bool:
    return self.ledger.cost_of(n) <= self.remaining_budget

  def sample(self, x: PointLike, n: int, stream: SeedStream) -> RunningStats:
    xp = as_point(x, self.problem.dim)
    if n < 1:
      raise OracleArgumentError(f"Shot count must be at least 1, got {n}")
    if not self.can_afford(n):
      raise BudgetExhaustedError(
          f"Request of {n} shots costs {self.ledger.cost_of(n)}, only {self.remaining_budget} of budget {self.budget} left")
    result = self.problem.sample(xp, n, stream)
    self.ledger.record(int(n))
    return result

  def __repr__(self) -> str:
    return f"<OracleHandle {self.problem.name} d={self.dim} {self.ledger!r}>"

def sample(handle: OracleHandle, x: PointLike, n: int, stream: SeedStream) -> RunningStats:
  """Statistics of n independent draws of F(x, xi), charged to the handle's ledger"""
  return handle.sample(x, n, stream)
