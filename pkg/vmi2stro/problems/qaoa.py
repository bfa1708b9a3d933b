#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""A QAOA max-cut oracle backed by a dense statevector simulator.

   The state starts in the uniform superposition. Layer l multiplies the amplitude of
   basis state z by exp(-i*gamma_l*cut(z)), then applies the X rotation

       RX(beta_l) = [[cos(beta_l/2), -i sin(beta_l/2)], [-i sin(beta_l/2), cos(beta_l/2)]]

   to every qubit. With this convention a single edge at depth 1 has expected cut
   (1 + sin(2 beta) sin(gamma))/2. Measurements return c(z) = -cut(z), so the
   objective is minimized and its optimum is -maxcut.
"""

from typing import Optional, Tuple, Union, Dict
from collections import OrderedDict
from dataclasses import dataclass

import logging
import math
import numpy as np

from ..internal_types import FloatArray, ComplexArray, PointLike
from ..constants import MAX_STATEVECTOR_QUBITS
from ..exceptions import ProblemError
from ..oracle import StochasticProblem
from ..stats import RunningStats
from ..streams import SeedStream
from ..util import as_point, hash_point
from .maxcut import Graph, cut_vector, maxcut_bruteforce

logger = logging.getLogger(__name__)

_PROBABILITY_CACHE_SIZE = 64

@dataclass(frozen=True)
class QaoaParams:
  depth: int
  angles: Tuple[float, ...]
  """(gamma_1, beta_1, ..., gamma_p, beta_p)"""

  def __post_init__(self):
    if self.depth < 1:
      raise ProblemError(f"QAOA depth must be at least 1, got {self.depth}")
    if len(self.angles) != 2 * self.depth:
      raise ProblemError(f"QAOA depth {self.depth} needs {2 * self.depth} angles, got {len(self.angles)}")

  @classmethod
  def from_vector(cls, x: PointLike) -> 'QaoaParams':
    xp = as_point(x)
    if xp.shape[0] < 2 or xp.shape[0] % 2 != 0:
      raise ProblemError(f"QAOA parameter vector must have even length >= 2, got {xp.shape[0]}")
    return cls(xp.shape[0] // 2, tuple(float(v) for v in xp))

  @property
  def gammas(self) -> Tuple[float, ...]:
    return self.angles[0::2]

  @property
  def betas(self) -> Tuple[float, ...]:
    return self.angles[1::2]

def cost_vector(g: Graph) -> FloatArray:
  """c(z) = -cut(z) for every basis index"""
  return -cut_vector(g).astype(np.float64)

def _apply_mixer(psi: ComplexArray, n: int, beta: float) -> ComplexArray:
  c = math.cos(0.5 * beta)
  s = math.sin(0.5 * beta)
  for q in range(n):
    view = psi.reshape(1 << (n - q - 1), 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - 1j * s * a1
    view[:, 1, :] = c * a1 - 1j * s * a0
  return psi

def qaoa_statevector(g: Graph, params: QaoaParams) -> ComplexArray:
  if g.n > MAX_STATEVECTOR_QUBITS:
    raise ProblemError(f"Statevector simulation supports at most {MAX_STATEVECTOR_QUBITS} qubits, got {g.n}")
  dim = 1 << g.n
  cuts = cut_vector(g).astype(np.float64)
  psi = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
  for gamma, beta in zip(params.gammas, params.betas):
    psi *= np.exp(-1j * gamma * cuts)
    psi = _apply_mixer(psi, g.n, beta)
  return psi

def _probabilities(state: ComplexArray) -> FloatArray:
  probs = np.abs(state) ** 2
  return probs / probs.sum()

def expectation_of_state(g: Graph, state: ComplexArray) -> Tuple[float, float]:
  """(mean, population variance) of c(z) = -cut(z) under |amplitude|^2"""
  probs = _probabilities(state)
  costs = cost_vector(g)
  mean = float(probs @ costs)
  variance = float(probs @ (costs * costs)) - mean * mean
  return mean, max(variance, 0.0)

def qaoa_expectation_exact(g: Graph, params: QaoaParams) -> Tuple[float, float]:
  return expectation_of_state(g, qaoa_statevector(g, params))

def _sample_costs(costs: FloatArray, probs: FloatArray, n: int, rng: np.random.Generator) -> FloatArray:
  # inverse CDF
  cdf = np.cumsum(probs)
  cdf /= cdf[-1]
  idx = np.searchsorted(cdf, rng.random(n), side='right')
  np.minimum(idx, cdf.shape[0] - 1, out=idx)
  return costs[idx]

def qaoa_sample(
      g: Graph,
      params: Union[QaoaParams, ComplexArray],
      n: int,
      stream: SeedStream
    ) -> RunningStats:
  """Statistics of n measurements of c(z) in the QAOA state (or a given statevector).

  Does not touch any ledger; solvers sample through an OracleHandle on a QaoaProblem.
  """
  if n < 1:
    raise ProblemError(f"Shot count must be at least 1, got {n}")
  state = qaoa_statevector(g, params) if isinstance(params, QaoaParams) else np.asarray(params, dtype=np.complex128)
  if state.shape != (1 << g.n,):
    raise ProblemError(f"Statevector must have {1 << g.n} amplitudes, got shape {state.shape}")
  draws = _sample_costs(cost_vector(g), _probabilities(state), n, stream.generator())
  return RunningStats.from_samples(draws)

class QaoaProblem(StochasticProblem):
  """Shot-sampled QAOA energy of a max-cut instance; the solver dimension is 2*depth"""
  name = "qaoa"
  default_delta_0 = 0.5
  graph: Graph
  depth: int
  _costs: FloatArray
  _maxcut: Optional[int]
  _cache: 'OrderedDict[bytes, FloatArray]'

  def __init__(self, graph: Graph, depth: int=5):
    if depth < 1:
      raise ProblemError(f"QAOA depth must be at least 1, got {depth}")
    if graph.n > MAX_STATEVECTOR_QUBITS:
      raise ProblemError(f"Statevector simulation supports at most {MAX_STATEVECTOR_QUBITS} qubits, got {graph.n}")
    self.graph = graph
    self.depth = depth
    self.dim = 2 * depth
    self._costs = cost_vector(graph)
    self._maxcut = None
    self._cache = OrderedDict()

  def probabilities(self, x: FloatArray) -> FloatArray:
    key = hash_point(x)
    probs = self._cache.get(key, None)
    if probs is None:
      probs = _probabilities(qaoa_statevector(self.graph, QaoaParams.from_vector(x)))
      self._cache[key] = probs
      if len(self._cache) > _PROBABILITY_CACHE_SIZE:
        self._cache.popitem(last=False)
    else:
      self._cache.move_to_end(key)
    return probs

  def draw_samples(self, x: FloatArray, n: int, rng: np.random.Generator) -> FloatArray:
    return _sample_costs(self._costs, self.probabilities(x), n, rng)

  @property
  def has_exact_mean(self) -> bool:
    return True

  def exact_mean(self, x: FloatArray) -> float:
    return float(self.probabilities(as_point(x, self.dim)) @ self._costs)

  def exact_variance(self, x: FloatArray) -> float:
    probs = self.probabilities(as_point(x, self.dim))
    mean = float(probs @ self._costs)
    return max(float(probs @ (self._costs * self._costs)) - mean * mean, 0.0)

  @property
  def maxcut(self) -> int:
    if self._maxcut is None:
      self._maxcut, _ = maxcut_bruteforce(self.graph)
    return self._maxcut

  @property
  def optimal_value(self) -> Optional[float]:
    return -float(self.maxcut)

  def default_x0(self, stream: SeedStream) -> FloatArray:
    return stream.child("x0").generator().uniform(0.0, math.pi, self.dim)

  def __getstate__(self) -> Dict:
    state = dict(self.__dict__)
    state['_cache'] = OrderedDict()
    return state

  def __repr__(self) -> str:
    return f"<QaoaProblem {self.graph!r} p={self.depth}>"
