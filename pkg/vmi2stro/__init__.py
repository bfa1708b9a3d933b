# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Package vmi2stro provides a variance-model-informed, two-stage-sampling stochastic trust-region
solver for latency-constrained oracles, with test problems, baselines and an experiment harness
"""

from .version import __version__

from .internal_types import FloatArray, PointLike

from .exceptions import (
    Vmi2stroError,
    OracleDomainError,
    OracleArgumentError,
    BudgetExhaustedError,
    GeometryError,
    ModelError,
    ProblemError,
    GraphFormatError,
    ConfigError,
  )

from .config import (
    Config,
    ConfigContext,
    Strategy,
    SamplingParams,
    SolverConfig,
    NelderMeadConfig,
    SpsaConfig,
  )

from .stats import RunningStats, merge
from .streams import SeedStream
from .oracle import CostLedger, total_cost, StochasticProblem, OracleHandle, sample
from .history import EvaluatedPoint, PointHistory
from .geometry import (
    DesignSet,
    coordinate_stencil,
    orthonormal_complement,
    choose_design_set,
    is_poised,
  )
from .models import QuadDiagModel, ModelKind, build_interpolation, build_variance_model, evaluate, gradient
from .subproblem import TrStep, solve
from .sampling import (
    lambda_schedule,
    streaming_adaptive,
    two_stage_lambda,
    two_stage_varmodel,
    two_stage_hybrid,
    reevaluate,
    estimate,
  )
from .solver import (
    Outcome,
    IterationDecision,
    IterationRecord,
    SolverState,
    SolverResult,
    vmi_choose_design_set,
    iterate,
    update_rule,
    run,
  )
from .baselines import run_nelder_mead, run_spsa
from .harness import (
    ExperimentSpec,
    ExperimentResult,
    ProgressCurve,
    run_experiment,
    emit_csv,
    read_csv,
    emit_trace_csv,
    variance_gap_correlation,
  )
