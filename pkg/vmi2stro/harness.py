#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Macro-replication experiments, budget-grid progress curves and CSV output.

   Each replication runs one solver on its own ledger, with the replication's root
   stream SeedStream(seed).replication(rep). The trajectory is expanded into trace points
   carrying the true mean at each recorded incumbent (exact for built-in problems, a
   high-shot estimate outside the ledger otherwise), then read off on an evenly spaced
   budget grid as a right-continuous step function of the running best estimate.
"""

from typing import Optional, List, Tuple, Sequence, Any
from dataclasses import dataclass, field, replace
from concurrent.futures import ProcessPoolExecutor

import csv
import logging
import math
import numpy as np
import scipy.stats

from .internal_types import FloatArray, IntArray
from .baselines import run_nelder_mead, run_spsa
from .config.params import SolverConfig, Strategy
from .config.baselines import NelderMeadConfig, SpsaConfig
from .constants import DEFAULT_REPS, DEFAULT_GRID_POINTS, CI_Z, POST_HOC_SHOTS, CSV_HEADER, TRACE_CSV_HEADER
from .exceptions import ConfigError
from .oracle import OracleHandle, CostLedger, StochasticProblem
from .problems import make_problem, PROBLEM_IDS
from .solver import run
from .streams import SeedStream
from .util import as_point

logger = logging.getLogger(__name__)

SOLVER_IDS: Tuple[str, ...] = ("vmi1", "vmi2", "vmi3", "astrodf", "neldermead", "spsa")

def solver_config_for(solver_id: str, base: SolverConfig) -> SolverConfig:
  """The trust-region configuration behind a solver id: vmi1..vmi3 are the two-stage
     strategies with the variance model; astrodf is streaming sampling without it."""
  if solver_id == "vmi1":
    return replace(base, strategy=Strategy.LAMBDA, variance_model=True)
  if solver_id == "vmi2":
    return replace(base, strategy=Strategy.VARMODEL, variance_model=True)
  if solver_id == "vmi3":
    return replace(base, strategy=Strategy.HYBRID, variance_model=True)
  if solver_id == "astrodf":
    return replace(base, strategy=Strategy.STREAMING, variance_model=False)
  raise ConfigError(f"'{solver_id}' is not a trust-region solver id")

@dataclass
class ExperimentSpec:
  problem_id: str = "himmelblau"
  solver_id: str = "vmi3"
  c_n: float = 0.0
  c_s: float = 1.0
  budget: float = 3000.0
  reps: int = DEFAULT_REPS
  seed: int = 0
  grid_points: int = DEFAULT_GRID_POINTS
  noise_scale: Optional[float] = None
  graph_path: Optional[str] = None
  cycle_vertices: Optional[int] = None
  depth: Optional[int] = None
  dim: Optional[int] = None
  x0: Optional[Tuple[float, ...]] = None
  """Start point shared by all replications; the problem's default start if None"""
  delta_0: Optional[float] = None
  """Initial radius; the problem's default if None"""
  solver: SolverConfig = field(default_factory=SolverConfig)
  neldermead: NelderMeadConfig = field(default_factory=NelderMeadConfig)
  spsa: SpsaConfig = field(default_factory=SpsaConfig)

  def validate(self) -> 'ExperimentSpec':
    if not self.problem_id in PROBLEM_IDS:
      raise ConfigError(f"Unknown problem '{self.problem_id}'; expected one of {', '.join(PROBLEM_IDS)}")
    if not self.solver_id in SOLVER_IDS:
      raise ConfigError(f"Unknown solver '{self.solver_id}'; expected one of {', '.join(SOLVER_IDS)}")
    if self.reps < 1:
      raise ConfigError(f"Replication count must be at least 1, got {self.reps}")
    if not (self.budget >= 0 and math.isfinite(self.budget)):
      raise ConfigError(f"Budget must be finite and nonnegative, got {self.budget}")
    if self.c_n < 0 or self.c_s < 0 or self.c_n + self.c_s == 0:
      raise ConfigError(f"Unit costs must be nonnegative and not both zero, got c_n={self.c_n}, c_s={self.c_s}")
    if self.grid_points < 1:
      raise ConfigError(f"Budget grid needs at least one point, got {self.grid_points}")
    return self

  def make_problem(self) -> StochasticProblem:
    return make_problem(
        self.problem_id,
        noise_scale=self.noise_scale,
        graph_path=self.graph_path,
        depth=self.depth,
        dim=self.dim,
        cycle_vertices=self.cycle_vertices,
      )

@dataclass
class TracePoint:
  """An incumbent as recorded by a solver, with its true mean"""
  cost: float
  x: FloatArray
  estimate: float
  true_value: float
  true_variance: float
  gap: float
  """true_value minus the problem's optimal value (nan if unknown)"""
  communications: int
  shots: int

@dataclass
class ReplicationResult:
  rep: int
  trace: List[TracePoint]
  x_best: FloatArray
  f_best: float
  true_value: float
  communications: int
  shots: int

@dataclass
class ProgressCurve:
  grid: FloatArray
  """Increasing budget grid, shape (G,)"""
  best_value: FloatArray
  """Running best estimate per (rep, grid point), shape (M, G); nan before the first estimate"""
  true_value: FloatArray
  gap: FloatArray
  communications: IntArray
  shots: IntArray

  @property
  def reps(self) -> int:
    return int(self.true_value.shape[0])

  def mean(self, column: str="true_value") -> FloatArray:
    return np.mean(getattr(self, column), axis=0)

  def confidence_interval(self, column: str="true_value") -> Tuple[FloatArray, FloatArray]:
    """mean +/- 1.96*s/sqrt(M) per grid point (zero width for a single replication)"""
    values = getattr(self, column)
    m = values.shape[0]
    center = np.mean(values, axis=0)
    if m < 2:
      return center.copy(), center.copy()
    half = CI_Z * np.std(values, axis=0, ddof=1) / math.sqrt(m)
    return center - half, center + half

@dataclass
class ExperimentResult:
  spec: ExperimentSpec
  curve: ProgressCurve
  replications: List[ReplicationResult]

  @property
  def answers(self) -> List[FloatArray]:
    return [r.x_best for r in self.replications]

def budget_grid(budget: float, points: int=DEFAULT_GRID_POINTS) -> FloatArray:
  if budget == 0.0 or points == 1:
    return np.array([float(budget)])
  return np.linspace(0.0, budget, points)

def _true_moments(problem: StochasticProblem, x: FloatArray, stream: SeedStream) -> Tuple[float, float]:
  if problem.has_exact_mean:
    mean = problem.exact_mean(x)
    try:
      variance = problem.exact_variance(x)
    except NotImplementedError:
      variance = math.nan
    return mean, variance
  stats = problem.sample(x, POST_HOC_SHOTS, stream)
  return stats.mean, stats.variance

def _trace_point(problem: StochasticProblem, stream: SeedStream, cost: float, x: FloatArray,
                 estimate: float, communications: int, shots: int) -> TracePoint:
  true_value, true_variance = _true_moments(problem, x, stream)
  optimum = problem.optimal_value
  gap = math.nan if optimum is None else true_value - optimum
  return TracePoint(cost, x.copy(), estimate, true_value, true_variance, gap, communications, shots)

def run_replication(spec: ExperimentSpec, rep: int) -> ReplicationResult:
  """Runs replication rep of spec on a fresh problem instance and ledger"""
  problem = spec.make_problem()
  handle = OracleHandle(problem, CostLedger(spec.c_n, spec.c_s), spec.budget)
  root = SeedStream(spec.seed).replication(rep)
  x0 = problem.default_x0(root) if spec.x0 is None else as_point(spec.x0, problem.dim)
  delta_0 = problem.default_delta_0 if spec.delta_0 is None else spec.delta_0

  if spec.solver_id == "neldermead":
    result: Any = run_nelder_mead(handle, x0, spec.neldermead, None, root)
  elif spec.solver_id == "spsa":
    result = run_spsa(handle, x0, spec.spsa, None, root)
  else:
    cfg = solver_config_for(spec.solver_id, spec.solver)
    cfg = replace(cfg, delta_0=delta_0, delta_max=max(cfg.delta_max, delta_0), budget=spec.budget)
    result = run(handle, x0, cfg, root)

  posthoc = root.child("posthoc")
  trace = [_trace_point(problem, posthoc.child(0), 0.0, x0, math.nan, 0, 0)]
  for i, record in enumerate(result.trajectory, start=1):
    trace.append(_trace_point(problem, posthoc.child(i), record.cost, record.incumbent,
                              record.estimate, record.communications, record.shots))
  true_value, _ = _true_moments(problem, result.x_best, posthoc.child("final"))
  ledger = handle.ledger
  logger.info("run_replication: %s/%s rep=%d cost=%.6g true_value=%.6g",
              spec.problem_id, spec.solver_id, rep, ledger.total_cost, true_value)
  return ReplicationResult(rep, trace, result.x_best.copy(), result.f_best, true_value,
                           ledger.communications, ledger.shots)

def _step_values(trace: Sequence[TracePoint], grid: FloatArray) -> Tuple[FloatArray, FloatArray, FloatArray, IntArray, IntArray]:
  """Right-continuous step interpolation of the running best estimate onto grid"""
  # the trace point that holds the running best estimate after each trace entry
  leader = 0
  leaders: List[int] = []
  for i, point in enumerate(trace):
    if not math.isnan(point.estimate) and (math.isnan(trace[leader].estimate) or point.estimate < trace[leader].estimate):
      leader = i
    leaders.append(leader)
  costs = np.array([p.cost for p in trace])
  best = np.empty(grid.shape[0])
  true = np.empty(grid.shape[0])
  gap = np.empty(grid.shape[0])
  comm = np.empty(grid.shape[0], dtype=np.int64)
  shots = np.empty(grid.shape[0], dtype=np.int64)
  for j, b in enumerate(grid):
    i = int(np.searchsorted(costs, b, side='right')) - 1
    i = max(i, 0)
    lead = trace[leaders[i]]
    best[j] = lead.estimate
    true[j] = lead.true_value
    gap[j] = lead.gap
    comm[j] = trace[i].communications
    shots[j] = trace[i].shots
  return best, true, gap, comm, shots

def progress_curve(replications: Sequence[ReplicationResult], grid: FloatArray) -> ProgressCurve:
  rows = [_step_values(r.trace, grid) for r in replications]
  return ProgressCurve(
      grid=np.asarray(grid, dtype=np.float64),
      best_value=np.stack([r[0] for r in rows]),
      true_value=np.stack([r[1] for r in rows]),
      gap=np.stack([r[2] for r in rows]),
      communications=np.stack([r[3] for r in rows]),
      shots=np.stack([r[4] for r in rows]),
    )

def run_replications(spec: ExperimentSpec, workers: int=1) -> List[ReplicationResult]:
  reps = list(range(spec.reps))
  if workers <= 1 or spec.reps == 1:
    results = [run_replication(spec, rep) for rep in reps]
  else:
    with ProcessPoolExecutor(max_workers=workers) as pool:
      results = list(pool.map(run_replication, [spec] * len(reps), reps))
  return sorted(results, key=lambda r: r.rep)

def run_experiment(spec: ExperimentSpec, workers: int=1) -> ExperimentResult:
  """Runs spec.reps independent replications and assembles the progress curve.

  Args:
      spec: the experiment
      workers: replications run in a process pool of this size if > 1; the result is
               the same as a serial run

  Raises:
      ConfigError: on unknown problem or solver ids or invalid settings
  """
  spec.validate()
  replications = run_replications(spec, workers)
  curve = progress_curve(replications, budget_grid(spec.budget, spec.grid_points))
  return ExperimentResult(spec, curve, replications)

def _fmt(v: float) -> str:
  return repr(float(v))

def emit_csv(curve: ProgressCurve, path: str):
  """Writes one row per (replication, grid point), replications in order"""
  with open(path, 'w', encoding='utf-8', newline='') as f:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for rep in range(curve.reps):
      for j, b in enumerate(curve.grid):
        writer.writerow([
            _fmt(b),
            rep,
            _fmt(curve.best_value[rep, j]),
            _fmt(curve.true_value[rep, j]),
            _fmt(curve.gap[rep, j]),
            int(curve.communications[rep, j]),
            int(curve.shots[rep, j]),
          ])

def read_csv(path: str) -> ProgressCurve:
  """Rebuilds a ProgressCurve from a file written by emit_csv"""
  with open(path, encoding='utf-8', newline='') as f:
    reader = csv.reader(f)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
      raise ConfigError(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
    rows = [row for row in reader if len(row) > 0]
  reps = sorted({ int(row[1]) for row in rows })
  grid = np.array([float(row[0]) for row in rows if int(row[1]) == reps[0]]) if len(reps) > 0 else np.zeros(0)
  m, g = len(reps), grid.shape[0]
  if m * g != len(rows):
    raise ConfigError(f"{path}: expected {m}x{g} rows, got {len(rows)}")
  best = np.empty((m, g))
  true = np.empty((m, g))
  gap = np.empty((m, g))
  comm = np.empty((m, g), dtype=np.int64)
  shots = np.empty((m, g), dtype=np.int64)
  position = { rep: i for i, rep in enumerate(reps) }
  counters = [0] * m
  for row in rows:
    r = position[int(row[1])]
    j = counters[r]
    counters[r] += 1
    best[r, j] = float(row[2])
    true[r, j] = float(row[3])
    gap[r, j] = float(row[4])
    comm[r, j] = int(row[5])
    shots[r, j] = int(row[6])
  return ProgressCurve(grid, best, true, gap, comm, shots)

def emit_trace_csv(replications: Sequence[ReplicationResult], path: str):
  """Writes every recorded incumbent of every replication with its exact moments"""
  with open(path, 'w', encoding='utf-8', newline='') as f:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(TRACE_CSV_HEADER)
    for r in replications:
      for p in r.trace:
        writer.writerow([r.rep, _fmt(p.cost), _fmt(p.true_value), _fmt(p.true_variance), _fmt(p.gap)])

def variance_gap_correlation(trace: Sequence[TracePoint]) -> float:
  """Spearman rank correlation between optimality gap and true variance along a trace.

  Returns nan when fewer than three points have both values or either is constant.
  """
  pairs = [(p.gap, p.true_variance) for p in trace if not (math.isnan(p.gap) or math.isnan(p.true_variance))]
  if len(pairs) < 3:
    return math.nan
  gaps = np.array([p[0] for p in pairs])
  variances = np.array([p[1] for p in pairs])
  if np.all(gaps == gaps[0]) or np.all(variances == variances[0]):
    return math.nan
  result = scipy.stats.spearmanr(gaps, variances)
  return float(result[0])
