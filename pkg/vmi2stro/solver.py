#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""The variance-model-informed two-stage stochastic trust-region solver.

   Each iteration:

   1. selects a design set of 2d+1 points in B(X_k; Delta_k), reusing the farthest
      evaluated point in the trust region;
   2. (from the second iteration on, if enabled) fits a variance model M_k^v to the
      sample variances of nearby history points in raw coordinates, minimizes it over
      the trust region, evaluates that point and swaps it into the design set;
   3. estimates every design point (two-stage rules for new points, a single top-up
      for reused ones) and interpolates the objective model M_k;
   4. minimizes M_k over the trust region and evaluates the candidate;
   5. accepts the best design point (direct search), the candidate, or neither, and
      expands, keeps or shrinks the radius.

   With the variance model disabled and the streaming sampler selected this is
   history-informed ASTRO-DF.
"""

from typing import Optional, List, Tuple, Union
from dataclasses import dataclass, field, replace
from enum import Enum

import logging
import math
import numpy as np

from .internal_types import FloatArray, PointLike
from .config.params import SolverConfig
from .constants import POINT_IDENTITY_TOL
from .exceptions import BudgetExhaustedError, ModelError
from .geometry import DesignSet, choose_design_set, is_poised
from .history import EvaluatedPoint, PointHistory
from .models import QuadDiagModel, build_interpolation, build_variance_model
from .oracle import OracleHandle, StochasticProblem, CostLedger
from .sampling import estimate, calibrate_kappa
from .streams import SeedStream
from .subproblem import solve
from .util import as_point, format_point

logger = logging.getLogger(__name__)

class Outcome(str, Enum):
  DIRECT_SEARCH = "direct-search-accept"
  VERY_SUCCESSFUL = "very-successful"
  SUCCESSFUL = "successful"
  UNSUCCESSFUL = "unsuccessful"

  @property
  def accepted(self) -> bool:
    return self != Outcome.UNSUCCESSFUL

@dataclass
class IterationDecision:
  outcome: Outcome
  delta: float
  incumbent: Optional[EvaluatedPoint] = None

@dataclass
class IterationRecord:
  """One row of a run's trajectory, written at the end of an iteration"""
  k: int
  cost: float
  """Cumulative c_n*Q_n + c_s*W_s when the iteration finished"""
  incumbent: FloatArray
  estimate: float
  delta: float
  """Radius for the next iteration"""
  outcome: Outcome
  communications: int
  shots: int
  new_points: int = 0
  reevaluations: int = 0
  iteration_communications: int = 0
  variance_model: bool = False

@dataclass
class SolverState:
  incumbent: EvaluatedPoint
  delta: float
  k: int
  history: PointHistory
  stream: SeedStream
  trajectory: List[IterationRecord] = field(default_factory=list)
  terminal: bool = False
  best: Optional[EvaluatedPoint] = None

@dataclass
class SolverResult:
  trajectory: List[IterationRecord]
  x_best: FloatArray
  f_best: float
  """Estimated value at x_best (nan if nothing was ever evaluated)"""
  state: SolverState

@dataclass
class _IterationAudit:
  new_points: int = 0
  reevaluations: int = 0

def initial_state(x0: PointLike, config: SolverConfig, stream: SeedStream) -> SolverState:
  history = PointHistory()
  incumbent = EvaluatedPoint(x0)
  return SolverState(incumbent=incumbent, delta=config.delta_0, k=0, history=history, stream=stream)

def _evaluate(
      state: SolverState,
      point: EvaluatedPoint,
      delta: float,
      config: SolverConfig,
      oracle: OracleHandle,
      audit: _IterationAudit,
      varmodel: Optional[QuadDiagModel],
      incumbent_variance: Optional[float]
    ) -> EvaluatedPoint:
  """Estimates a point once per iteration, counting it as new or reevaluated"""
  if point.count > 0 and point.iteration == state.k:
    return point
  if point.count > 0:
    audit.reevaluations += 1
  else:
    audit.new_points += 1
  state.history.add(point)
  point = estimate(
      oracle, point, delta, state.k, config.sampling, config.strategy, state.stream,
      varmodel=varmodel, incumbent_variance=incumbent_variance)
  point.iteration = state.k
  return point

def _variance_radius(distances: FloatArray, needed: int, delta: float, w: float) -> Optional[float]:
  """Smallest Delta*w^j (j = 0, 1, ...) whose ball holds at least needed points"""
  if distances.shape[0] < needed:
    return None
  reach = float(np.sort(distances)[needed - 1])
  radius = delta
  while radius < reach - POINT_IDENTITY_TOL:
    radius *= w
  return radius

def vmi_choose_design_set(
      state: SolverState,
      delta: float,
      config: SolverConfig,
      oracle: Optional[OracleHandle]=None,
      audit: Optional[_IterationAudit]=None,
      incumbent_variance: Optional[float]=None
    ) -> Tuple[DesignSet, Optional[QuadDiagModel], Optional[EvaluatedPoint]]:
  """Design set selection informed by the variance model.

  Returns:
      (design set, variance model or None, evaluated variance-model minimizer or None)
  """
  center = state.incumbent.x
  design = choose_design_set(center, delta, state.history)
  if state.k == 0 or not config.variance_model:
    return design, None, None

  d = center.shape[0]
  candidates = [p for p in state.history if p.count >= 2]
  if len(candidates) == 0:
    return design, None, None
  distances = np.linalg.norm(np.stack([p.x for p in candidates]) - center, axis=1)
  radius = _variance_radius(distances, 2 * d + 1, delta, config.w)
  if radius is None:
    logger.info("vmi_choose_design_set: only %d points with variance estimates; no variance model", len(candidates))
    return design, None, None
  xv_points = [p for p, r in zip(candidates, distances) if r <= radius + POINT_IDENTITY_TOL]
  varmodel = build_variance_model(xv_points, None, center=center, radius=radius)
  if varmodel is None:
    logger.info("vmi_choose_design_set: variance design of %d points is not pseudoinvertible", len(xv_points))
    return design, None, None

  step = solve(varmodel, delta).step
  if float(np.linalg.norm(step)) <= POINT_IDENTITY_TOL or oracle is None:
    return design, varmodel, None
  x_v = center + step
  point = state.history.get_or_create(x_v)
  point = _evaluate(state, point, delta, config, oracle, audit if not audit is None else _IterationAudit(),
                    varmodel, incumbent_variance)

  nearest = int(np.argmin(np.linalg.norm(design.points - point.x, axis=1)))
  lowest_swappable = 1 if design.is_stencil else 2
  if nearest < lowest_swappable:
    logger.debug("vmi_choose_design_set: %s is nearest to design point %d; not swapped", format_point(point.x), nearest)
    return design, varmodel, point
  swapped = design.copy()
  swapped.points[nearest] = point.x
  swapped.evaluated[nearest] = point
  swapped.reused[nearest] = False
  swapped.is_stencil = False
  if not is_poised(swapped):
    logger.debug("vmi_choose_design_set: swap at index %d breaks poisedness; not swapped", nearest)
    return design, varmodel, point
  return swapped, varmodel, point

def update_rule(
      model_reduction: float,
      candidate_reduction: float,
      direct_reduction: float,
      grad_norm: float,
      delta: float,
      config: SolverConfig,
      incumbent: Optional[EvaluatedPoint]=None,
      candidate: Optional[EvaluatedPoint]=None,
      best_design: Optional[EvaluatedPoint]=None
    ) -> IterationDecision:
  """The four-case acceptance table, tested in order.

  Args:
      model_reduction: R_k = M_k(X_k) - M_k(X~_{k+1})
      candidate_reduction: R~_k = F(X_k) - F(X~_{k+1})
      direct_reduction: R^_k = F(X_k) - F(X^_{k+1})
      grad_norm: ||grad M_k(X_k)||
  """
  expanded = min(config.gamma_1 * delta, config.delta_max)
  certified = config.mu * grad_norm >= delta
  if direct_reduction > max(candidate_reduction, config.theta * delta * delta):
    return IterationDecision(Outcome.DIRECT_SEARCH, expanded, best_design)
  if candidate_reduction > 0 and candidate_reduction >= config.eta_2 * model_reduction and certified:
    return IterationDecision(Outcome.VERY_SUCCESSFUL, expanded, candidate)
  if candidate_reduction > 0 and candidate_reduction >= config.eta_1 * model_reduction and certified:
    return IterationDecision(Outcome.SUCCESSFUL, delta, candidate)
  return IterationDecision(Outcome.UNSUCCESSFUL, config.gamma_2 * delta, incumbent)

def iterate(state: SolverState, config: SolverConfig, oracle: OracleHandle) -> Tuple[SolverState, Optional[IterationDecision]]:
  """Runs one iteration in place.

  Returns:
      (state, decision); decision is None if the budget ran out mid-iteration, in which
      case state.terminal is set and the incumbent is left unchanged.
  """
  k = state.k
  delta = state.delta
  comm_before = oracle.ledger.communications
  audit = _IterationAudit()
  incumbent = state.incumbent
  incumbent_variance = incumbent.variance if incumbent.count >= 2 else None
  try:
    design, varmodel, x_v = vmi_choose_design_set(state, delta, config, oracle, audit, incumbent_variance)

    # Objective model on the design set; index 0 is the incumbent
    points: List[EvaluatedPoint] = []
    for i in range(len(design)):
      if i == 0:
        point = incumbent
      else:
        cached = design.evaluated[i]
        point = cached if not cached is None else state.history.get_or_create(design.points[i])
      point = _evaluate(state, point, delta, config, oracle, audit, varmodel, incumbent_variance)
      points.append(point)
    values = np.array([p.mean for p in points])
    try:
      model = build_interpolation(design, values)
    except ModelError as ex:
      logger.warning("iterate: k=%d objective model failed (%s); shrinking", k, ex)
      decision = IterationDecision(Outcome.UNSUCCESSFUL, config.gamma_2 * delta, incumbent)
      return _finish(state, decision, oracle, comm_before, audit, varmodel is not None), decision

    step = solve(model, delta)
    if float(np.linalg.norm(step.step)) <= POINT_IDENTITY_TOL:
      candidate = incumbent
    else:
      candidate = state.history.get_or_create(incumbent.x + step.step)
      candidate = _evaluate(state, candidate, delta, config, oracle, audit, varmodel, incumbent_variance)
  except BudgetExhaustedError as ex:
    logger.info("iterate: k=%d budget exhausted mid-iteration: %s", k, ex)
    state.terminal = True
    return state, None

  others = points[1:]
  best_design = min(others, key=lambda p: (p.mean, p.order))
  f_incumbent = incumbent.mean
  decision = update_rule(
      step.predicted_reduction,
      f_incumbent - candidate.mean,
      f_incumbent - best_design.mean,
      float(np.linalg.norm(model.gradient)),
      delta,
      config,
      incumbent=incumbent,
      candidate=candidate,
      best_design=best_design,
    )
  return _finish(state, decision, oracle, comm_before, audit, varmodel is not None), decision

def _finish(
      state: SolverState,
      decision: IterationDecision,
      oracle: OracleHandle,
      comm_before: int,
      audit: _IterationAudit,
      used_varmodel: bool
    ) -> SolverState:
  if not decision.incumbent is None:
    state.incumbent = decision.incumbent
  state.delta = decision.delta
  ledger = oracle.ledger
  record = IterationRecord(
      k=state.k,
      cost=ledger.total_cost,
      incumbent=state.incumbent.x.copy(),
      estimate=state.incumbent.mean,
      delta=state.delta,
      outcome=decision.outcome,
      communications=ledger.communications,
      shots=ledger.shots,
      new_points=audit.new_points,
      reevaluations=audit.reevaluations,
      iteration_communications=ledger.communications - comm_before,
      variance_model=used_varmodel,
    )
  state.trajectory.append(record)
  if state.best is None or state.incumbent.mean < state.best.mean:
    state.best = state.incumbent
  logger.debug(
      "iterate: k=%d outcome=%s delta=%.4g cost=%.6g f=%.6g x=%s",
      state.k, decision.outcome.value, state.delta, record.cost, record.estimate, format_point(record.incumbent))
  state.k += 1
  return state

def run(
      problem: Union[OracleHandle, StochasticProblem],
      x0: PointLike,
      config: SolverConfig,
      seed: Union[int, SeedStream]=0
    ) -> SolverResult:
  """Iterates until the cost budget is spent.

  Args:
      problem: an oracle handle (its ledger is charged), or a bare problem (a fresh
               ledger with c_n=0, c_s=1 is used)
      x0: initial incumbent
      config: solver parameters; config.budget bounds total cost unless the handle
              already carries a budget
      seed: base seed or the replication's root stream

  Returns:
      SolverResult: the trajectory, and the incumbent with the best estimated value
  """
  config.validate()
  oracle = problem if isinstance(problem, OracleHandle) else OracleHandle(problem, CostLedger())
  if oracle.budget is None:
    oracle.budget = config.budget
  stream = seed if isinstance(seed, SeedStream) else SeedStream(int(seed))
  x_start = as_point(x0, oracle.dim)
  state = initial_state(x_start, config, stream)

  budget = oracle.budget
  if config.sampling.kappa_from_start and oracle.ledger.total_cost < budget:
    try:
      sampling = calibrate_kappa(oracle, state.incumbent, config.delta_0, config.sampling, stream)
      config = replace(config, sampling=sampling)
    except BudgetExhaustedError as ex:
      logger.info("run: budget exhausted calibrating kappa: %s", ex)
      state.terminal = True
  while not state.terminal and oracle.ledger.total_cost < budget:
    if config.max_iterations > 0 and state.k >= config.max_iterations:
      break
    if state.delta < config.delta_min:
      logger.info("run: trust-region radius %.3g fell below %.3g; stopping", state.delta, config.delta_min)
      break
    cost_before = oracle.ledger.total_cost
    iterate(state, config, oracle)
    if not state.terminal and oracle.ledger.total_cost == cost_before and math.isinf(budget):
      logger.warning("run: iteration %d consumed no budget under an unbounded budget; stopping", state.k - 1)
      break

  best = state.best
  if best is None:
    return SolverResult(state.trajectory, x_start, math.nan, state)
  return SolverResult(state.trajectory, best.x.copy(), best.mean, state)
