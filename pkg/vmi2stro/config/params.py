# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Parameter sets for the sampling rules and the trust-region solver."""

from dataclasses import dataclass, field
from enum import Enum

import math

from ..constants import (
    DEFAULT_LAMBDA_0,
    DEFAULT_LAMBDA_EXPONENT,
    DEFAULT_LAMBDA_SHIFT,
    DEFAULT_KAPPA,
    DEFAULT_C_V,
    DEFAULT_N_MAX,
    DEFAULT_DELTA_MAX,
    DEFAULT_ETA_1,
    DEFAULT_ETA_2,
    DEFAULT_MU,
    DEFAULT_THETA,
    DEFAULT_GAMMA_1,
    DEFAULT_GAMMA_2,
    DEFAULT_W,
    DEFAULT_DELTA_MIN,
  )
from ..exceptions import ConfigError

class Strategy(str, Enum):
  """How new design points are sampled"""
  LAMBDA = "1"
  """Two-stage, first stage of lambda_k shots"""
  VARMODEL = "2"
  """Two-stage, first stage sized by the variance model"""
  HYBRID = "3"
  """Two-stage, variance model unless it looks inaccurate, then lambda_k"""
  STREAMING = "streaming"
  """Classical adaptive sampling in increments until the stopping rule holds"""

  @classmethod
  def parse(cls, s: str) -> 'Strategy':
    key = s.strip().lower()
    aliases = { 'lambda': cls.LAMBDA, 'varmodel': cls.VARMODEL, 'hybrid': cls.HYBRID, 'adaptive': cls.STREAMING }
    if key in aliases:
      return aliases[key]
    for member in cls:
      if member.value == key:
        return member
    raise ConfigError(f"Unknown sampling strategy '{s}'")

  @property
  def is_two_stage(self) -> bool:
    return self != Strategy.STREAMING

@dataclass(frozen=True)
class SamplingParams:
  kappa: float = DEFAULT_KAPPA
  lambda_0: float = DEFAULT_LAMBDA_0
  lambda_exponent: float = DEFAULT_LAMBDA_EXPONENT
  """lambda_k = ceil(lambda_0 * ln(k + lambda_shift)^lambda_exponent); 0 gives a constant lambda_0"""
  lambda_shift: float = DEFAULT_LAMBDA_SHIFT
  c_v: float = DEFAULT_C_V
  n_max: int = DEFAULT_N_MAX
  batch: int = 0
  """Streaming increment size; 0 means lambda_k"""
  kappa_from_start: bool = False
  """Replace kappa by |F_hat(X_0)|/Delta_0^2 after a first lambda_0-shot estimate at the start"""

  def lambda_k(self, k: int) -> int:
    if self.lambda_exponent == 0.0:
      value = self.lambda_0
    else:
      value = self.lambda_0 * math.log(k + self.lambda_shift) ** self.lambda_exponent
    return min(max(2, int(math.ceil(round(value, 9)))), self.n_max)

  def batch_size(self, k: int) -> int:
    return self.batch if self.batch > 0 else self.lambda_k(k)

  def validate(self) -> 'SamplingParams':
    if not self.kappa > 0:
      raise ConfigError(f"SamplingParams: kappa must be positive, got {self.kappa}")
    if not self.lambda_0 >= 2:
      raise ConfigError(f"SamplingParams: lambda_0 must be at least 2, got {self.lambda_0}")
    if self.lambda_exponent < 0:
      raise ConfigError(f"SamplingParams: lambda_exponent must be nonnegative, got {self.lambda_exponent}")
    if not self.lambda_shift >= math.e:
      # ln(k + shift) >= 1 keeps the schedule at or above lambda_0 and nondecreasing
      raise ConfigError(f"SamplingParams: lambda_shift must be at least e, got {self.lambda_shift}")
    if not self.c_v > 0:
      raise ConfigError(f"SamplingParams: c_v must be positive, got {self.c_v}")
    if self.n_max < 2:
      raise ConfigError(f"SamplingParams: n_max must be at least 2, got {self.n_max}")
    if self.batch < 0:
      raise ConfigError(f"SamplingParams: batch must be nonnegative, got {self.batch}")
    return self

@dataclass(frozen=True)
class SolverConfig:
  delta_0: float = 1.0
  delta_max: float = DEFAULT_DELTA_MAX
  eta_1: float = DEFAULT_ETA_1
  eta_2: float = DEFAULT_ETA_2
  mu: float = DEFAULT_MU
  theta: float = DEFAULT_THETA
  gamma_1: float = DEFAULT_GAMMA_1
  gamma_2: float = DEFAULT_GAMMA_2
  w: float = DEFAULT_W
  strategy: Strategy = Strategy.HYBRID
  variance_model: bool = True
  budget: float = math.inf
  delta_min: float = DEFAULT_DELTA_MIN
  """The run stops once the radius falls below this"""
  max_iterations: int = 0
  """0 means no limit"""
  sampling: SamplingParams = field(default_factory=SamplingParams)

  def validate(self) -> 'SolverConfig':
    if not (self.delta_0 > 0 and self.delta_max > 0 and self.delta_0 <= self.delta_max):
      raise ConfigError(f"SolverConfig: need 0 < delta_0 <= delta_max, got {self.delta_0}, {self.delta_max}")
    if not (0 < self.eta_1 < self.eta_2 < 1):
      raise ConfigError(f"SolverConfig: need 0 < eta_1 < eta_2 < 1, got {self.eta_1}, {self.eta_2}")
    if not self.mu > 0:
      raise ConfigError(f"SolverConfig: mu must be positive, got {self.mu}")
    if not self.theta > 0:
      raise ConfigError(f"SolverConfig: theta must be positive, got {self.theta}")
    if not self.gamma_1 > 1:
      raise ConfigError(f"SolverConfig: gamma_1 must exceed 1, got {self.gamma_1}")
    if not 0 < self.gamma_2 < 1:
      raise ConfigError(f"SolverConfig: gamma_2 must lie in (0, 1), got {self.gamma_2}")
    if not self.w > 1:
      raise ConfigError(f"SolverConfig: w must exceed 1, got {self.w}")
    if not self.budget >= 0:
      raise ConfigError(f"SolverConfig: budget must be nonnegative, got {self.budget}")
    if not self.delta_min > 0:
      raise ConfigError(f"SolverConfig: delta_min must be positive, got {self.delta_min}")
    if self.max_iterations < 0:
      raise ConfigError(f"SolverConfig: max_iterations must be nonnegative, got {self.max_iterations}")
    self.sampling.validate()
    return self
