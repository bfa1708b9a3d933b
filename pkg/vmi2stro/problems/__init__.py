#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Built-in stochastic test problems"""

from typing import Optional, Tuple

from ..exceptions import ConfigError
from ..oracle import StochasticProblem
from .base import GaussianNoiseProblem
from .himmelblau import (
    HimmelblauProblem,
    NoiseSpec,
    himmelblau_mean,
    himmelblau_sample,
    HIMMELBLAU_STARTS,
    HIMMELBLAU_MINIMIZER,
  )
from .sphere import SphereProblem
from .maxcut import (
    Graph,
    cycle_graph,
    cut_value,
    cut_vector,
    maxcut_bruteforce,
    load_graph,
    parse_graph,
    index_to_bitstring,
    bitstring_to_index,
  )
from .qaoa import (
    QaoaParams,
    QaoaProblem,
    cost_vector,
    qaoa_statevector,
    qaoa_expectation_exact,
    qaoa_sample,
    expectation_of_state,
  )

PROBLEM_IDS: Tuple[str, ...] = ("himmelblau", "sphere", "qaoa")

DEFAULT_QAOA_VERTICES = 5
DEFAULT_QAOA_DEPTH = 5

def make_problem(
      problem_id: str,
      noise_scale: Optional[float]=None,
      graph_path: Optional[str]=None,
      depth: Optional[int]=None,
      dim: Optional[int]=None,
      cycle_vertices: Optional[int]=None
    ) -> StochasticProblem:
  """Builds a built-in problem by id.

  Args:
      problem_id: one of PROBLEM_IDS
      noise_scale: Himmelblau variance scale a, or the sphere's constant noise variance
      graph_path: QAOA edge-list file
      cycle_vertices: QAOA on the cycle C_n when no graph file is given (default C_5)
      depth: QAOA depth p
      dim: sphere dimension

  Raises:
      ConfigError: if problem_id is unknown
  """
  if problem_id == "himmelblau":
    return HimmelblauProblem(NoiseSpec(1.0 if noise_scale is None else noise_scale))
  if problem_id == "sphere":
    return SphereProblem(dim=2 if dim is None else dim, noise=0.0 if noise_scale is None else noise_scale)
  if problem_id == "qaoa":
    if not graph_path is None:
      graph = load_graph(graph_path)
    else:
      graph = cycle_graph(DEFAULT_QAOA_VERTICES if cycle_vertices is None else cycle_vertices)
    return QaoaProblem(graph, DEFAULT_QAOA_DEPTH if depth is None else depth)
  raise ConfigError(f"Unknown problem '{problem_id}'; expected one of {', '.join(PROBLEM_IDS)}")
