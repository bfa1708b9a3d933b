#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Himmelblau's function with an |x_1 - 3| kink and state-dependent Gaussian noise.

   f(x) = (x_1^2 + x_2 - 11)^2 + (x_1 + x_2^2 - 7)^2 + |x_1 - 3|
   sigma^2(x) = a*|(x_1 - 3)(x_2 - 2)|

   The kink leaves (3, 2) as the only global minimizer, where the noise also vanishes.
"""

from typing import Optional, Tuple
from dataclasses import dataclass

import numpy as np

from ..internal_types import FloatArray, PointLike
from ..exceptions import ProblemError
from ..stats import RunningStats
from ..streams import SeedStream
from ..util import as_point
from .base import GaussianNoiseProblem

HIMMELBLAU_MINIMIZER: Tuple[float, float] = (3.0, 2.0)

HIMMELBLAU_STARTS: Tuple[Tuple[float, float], ...] = (
    (-5.0, -5.0),
    (0.0, 0.0),
    (-2.0, -2.0),
    (-4.0, -3.0),
    (-3.0, -3.0),
    (-2.0, 3.0),
    (3.0, 3.0),
  )

@dataclass(frozen=True)
class NoiseSpec:
  a: float = 1.0
  """Variance scale; sigma^2(x) = a*|(x_1 - 3)(x_2 - 2)|"""

  def __post_init__(self):
    if not self.a >= 0.0:
      raise ProblemError(f"Himmelblau noise scale must be nonnegative, got {self.a}")

  def variance(self, x: FloatArray) -> float:
    return float(self.a * abs((x[0] - 3.0) * (x[1] - 2.0)))

def himmelblau_mean(x: PointLike) -> float:
  xp = as_point(x, 2)
  x1, x2 = float(xp[0]), float(xp[1])
  return (x1 * x1 + x2 - 11.0) ** 2 + (x1 + x2 * x2 - 7.0) ** 2 + abs(x1 - 3.0)

class HimmelblauProblem(GaussianNoiseProblem):
  name = "himmelblau"
  dim = 2
  default_delta_0 = 1.0
  noise: NoiseSpec

  def __init__(self, noise: Optional[NoiseSpec]=None):
    self.noise = NoiseSpec() if noise is None else noise

  def mean(self, x: FloatArray) -> float:
    return himmelblau_mean(x)

  def noise_variance(self, x: FloatArray) -> float:
    return self.noise.variance(x)

  @property
  def optimal_value(self) -> Optional[float]:
    return 0.0

  def default_x0(self, stream: SeedStream) -> FloatArray:
    return np.array(HIMMELBLAU_STARTS[0])

  def __repr__(self) -> str:
    return f"<HimmelblauProblem a={self.noise.a}>"

def himmelblau_sample(x: PointLike, n: int, spec: NoiseSpec, stream: SeedStream) -> RunningStats:
  """Statistics of n draws of the noisy Himmelblau function at x (no ledger)"""
  return HimmelblauProblem(spec).sample(x, n, stream)
