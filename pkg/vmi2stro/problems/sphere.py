#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

from typing import Optional

import numpy as np

from ..internal_types import FloatArray, PointLike
from ..exceptions import ProblemError
from ..streams import SeedStream
from ..util import as_point
from .base import GaussianNoiseProblem

class SphereProblem(GaussianNoiseProblem):
  """F(x, xi) = ||x - c||^2 + sqrt(noise)*xi, with constant noise variance (zero by default)"""
  name = "sphere"
  default_delta_0 = 1.0
  center: FloatArray
  noise: float

  def __init__(self, dim: int=2, noise: float=0.0, center: Optional[PointLike]=None):
    if dim < 1:
      raise ProblemError(f"Sphere dimension must be at least 1, got {dim}")
    if not noise >= 0.0:
      raise ProblemError(f"Sphere noise variance must be nonnegative, got {noise}")
    self.dim = dim
    self.noise = float(noise)
    self.center = np.zeros(dim) if center is None else as_point(center, dim)

  def mean(self, x: FloatArray) -> float:
    diff = x - self.center
    return float(diff @ diff)

  def noise_variance(self, x: FloatArray) -> float:
    return self.noise

  @property
  def optimal_value(self) -> Optional[float]:
    return 0.0

  def default_x0(self, stream: SeedStream) -> FloatArray:
    return self.center + 5.0

  def __repr__(self) -> str:
    return f"<SphereProblem d={self.dim} noise={self.noise}>"
