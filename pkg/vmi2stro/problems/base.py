#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Problems whose draws are a known mean plus independent Gaussian noise."""

from abc import abstractmethod

import math
import numpy as np

from ..internal_types import FloatArray
from ..oracle import StochasticProblem

class GaussianNoiseProblem(StochasticProblem):
  """F(x, xi) = f(x) + sigma(x)*xi with xi ~ N(0, 1).

  Where sigma(x) is zero every draw equals f(x) exactly, so the sample variance is
  exactly zero.
  """

  @abstractmethod
  def mean(self, x: FloatArray) -> float:
    ...

  @abstractmethod
  def noise_variance(self, x: FloatArray) -> float:
    ...

  def draw_samples(self, x: FloatArray, n: int, rng: np.random.Generator) -> FloatArray:
    f = self.mean(x)
    var = self.noise_variance(x)
    if var == 0.0:
      return np.full(n, f)
    return f + math.sqrt(var) * rng.standard_normal(n)

  @property
  def has_exact_mean(self) -> bool:
    return True

  def exact_mean(self, x: FloatArray) -> float:
    return self.mean(x)

  def exact_variance(self, x: FloatArray) -> float:
    return self.noise_variance(x)
