#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Nelder-Mead and SPSA baselines.

   Both solvers estimate F at a point with a fixed number of shots in a single oracle
   call, through the same OracleHandle and ledger as the trust-region solver, so their
   progress can be plotted on the same cost axis. A point that has been estimated before
   reuses its estimate.
"""

from typing import Optional, List, Tuple, Union
from dataclasses import dataclass

import logging
import math
import numpy as np

from .internal_types import FloatArray, PointLike
from .config.baselines import NelderMeadConfig, SpsaConfig
from .exceptions import BudgetExhaustedError
from .history import EvaluatedPoint, PointHistory
from .oracle import OracleHandle, StochasticProblem, CostLedger
from .streams import SeedStream
from .util import as_point

logger = logging.getLogger(__name__)

@dataclass
class BaselineRecord:
  k: int
  cost: float
  incumbent: FloatArray
  estimate: float
  step: str
  """The move taken: reflect, expand, contract, shrink, ... or spsa"""
  communications: int
  shots: int
  delta: float = math.nan
  """Simplex diameter (Nelder-Mead) or perturbation size c_k (SPSA)"""

@dataclass
class BaselineResult:
  trajectory: List[BaselineRecord]
  x_best: FloatArray
  f_best: float

def _handle(oracle: Union[OracleHandle, StochasticProblem], budget: Optional[float]) -> OracleHandle:
  handle = oracle if isinstance(oracle, OracleHandle) else OracleHandle(oracle, CostLedger())
  if not budget is None:
    handle.budget = budget
  return handle

def _estimate(oracle: OracleHandle, history: PointHistory, x: FloatArray, shots: int, stream: SeedStream) -> EvaluatedPoint:
  point = history.get_or_create(x)
  if point.count == 0:
    stats = oracle.sample(point.x, shots, point.next_stream(stream))
    point.absorb(stats)
    history.add(point)
  return point

def _record(oracle: OracleHandle, k: int, x: FloatArray, f: float, step: str, delta: float) -> BaselineRecord:
  ledger = oracle.ledger
  return BaselineRecord(
      k=k, cost=ledger.total_cost, incumbent=x.copy(), estimate=f, step=step,
      communications=ledger.communications, shots=ledger.shots, delta=delta)

def run_nelder_mead(
      oracle: Union[OracleHandle, StochasticProblem],
      x0: PointLike,
      config: Optional[NelderMeadConfig]=None,
      budget: Optional[float]=None,
      stream: Union[int, SeedStream]=0
    ) -> BaselineResult:
  """Nelder-Mead on sample means of config.replications shots per vertex.

  Stops when the next vertex evaluation would exceed the budget. If the initial
  simplex cannot be completed the result is x0 with an empty trajectory.
  """
  cfg = NelderMeadConfig() if config is None else config
  cfg.validate()
  handle = _handle(oracle, budget)
  root = stream if isinstance(stream, SeedStream) else SeedStream(int(stream))
  x_start = as_point(x0, handle.dim)
  d = x_start.shape[0]
  r = cfg.replications
  history = PointHistory()
  trajectory: List[BaselineRecord] = []

  def f(x: FloatArray) -> EvaluatedPoint:
    return _estimate(handle, history, x, r, root)

  try:
    simplex = [f(x_start)] + [f(x_start + cfg.initial_scale * np.eye(d)[i]) for i in range(d)]
  except BudgetExhaustedError:
    logger.info("run_nelder_mead: budget too small for the initial simplex")
    return BaselineResult(trajectory, x_start, math.nan)

  def diameter() -> float:
    return max(float(np.linalg.norm(p.x - simplex[0].x)) for p in simplex[1:])

  k = 0
  trajectory.append(_record(handle, k, simplex[0].x, simplex[0].mean, "init", diameter()))
  try:
    while True:
      simplex.sort(key=lambda p: p.mean)
      best, worst = simplex[0], simplex[-1]
      if diameter() <= 1.0e-14:
        logger.info("run_nelder_mead: simplex collapsed at iteration %d", k)
        break
      centroid = np.mean([p.x for p in simplex[:-1]], axis=0)
      xr = f(centroid + cfg.reflection * (centroid - worst.x))
      step = "reflect"
      if xr.mean < best.mean:
        xe = f(centroid + cfg.expansion * (xr.x - centroid))
        if xe.mean < xr.mean:
          simplex[-1], step = xe, "expand"
        else:
          simplex[-1] = xr
      elif xr.mean < simplex[-2].mean:
        simplex[-1] = xr
      else:
        if xr.mean < worst.mean:
          xc = f(centroid + cfg.contraction * (xr.x - centroid))
          accept = xc.mean <= xr.mean
          step = "contract-outside"
        else:
          xc = f(centroid + cfg.contraction * (worst.x - centroid))
          accept = xc.mean < worst.mean
          step = "contract-inside"
        if accept:
          simplex[-1] = xc
        else:
          step = "shrink"
          simplex = [best] + [f(best.x + cfg.shrink * (p.x - best.x)) for p in simplex[1:]]
      k += 1
      leader = min(simplex, key=lambda p: p.mean)
      trajectory.append(_record(handle, k, leader.x, leader.mean, step, diameter()))
  except BudgetExhaustedError:
    logger.info("run_nelder_mead: budget exhausted after %d iterations", k)

  leader = min(simplex, key=lambda p: p.mean)
  return BaselineResult(trajectory, leader.x.copy(), leader.mean)

def rademacher(d: int, rng: np.random.Generator) -> FloatArray:
  """A vector of d independent +/-1 entries"""
  return 2.0 * rng.integers(0, 2, size=d).astype(np.float64) - 1.0

def spsa_gains(k: int, config: SpsaConfig) -> Tuple[float, float]:
  """(a_k, c_k) = (a/(k+1+A)^alpha, c/(k+1)^gamma_exp)"""
  return (config.a / (k + 1 + config.A) ** config.alpha, config.c / (k + 1) ** config.gamma_exp)

def run_spsa(
      oracle: Union[OracleHandle, StochasticProblem],
      x0: PointLike,
      config: Optional[SpsaConfig]=None,
      budget: Optional[float]=None,
      stream: Union[int, SeedStream]=0,
      max_iterations: int=0
    ) -> BaselineResult:
  """x_{k+1} = x_k - a_k*g_k with g_k = (F(x_k + c_k*delta) - F(x_k - c_k*delta))/(2 c_k) * delta.

  Two oracle calls per iteration. The answer is the last iterate; its recorded
  estimate is the mean of the two perturbed points around it.
  """
  cfg = SpsaConfig() if config is None else config
  cfg.validate()
  handle = _handle(oracle, budget)
  root = stream if isinstance(stream, SeedStream) else SeedStream(int(stream))
  x = as_point(x0, handle.dim)
  d = x.shape[0]
  history = PointHistory()
  trajectory: List[BaselineRecord] = []
  estimate = math.nan
  k = 0
  try:
    while max_iterations <= 0 or k < max_iterations:
      a_k, c_k = spsa_gains(k, cfg)
      delta = rademacher(d, root.child("spsa-delta", k).generator())
      plus = _estimate(handle, history, x + c_k * delta, cfg.replications, root)
      minus = _estimate(handle, history, x - c_k * delta, cfg.replications, root)
      estimate = 0.5 * (plus.mean + minus.mean)
      g = (plus.mean - minus.mean) / (2.0 * c_k) * delta
      x = x - a_k * g
      trajectory.append(_record(handle, k, x, estimate, "spsa", c_k))
      k += 1
  except BudgetExhaustedError:
    logger.info("run_spsa: budget exhausted after %d iterations", k)
  return BaselineResult(trajectory, x.copy(), estimate)
