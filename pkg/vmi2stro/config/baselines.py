# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Parameter sets for the Nelder-Mead and SPSA baseline solvers."""

from dataclasses import dataclass

from ..exceptions import ConfigError

@dataclass(frozen=True)
class NelderMeadConfig:
  replications: int = 30
  """Shots per vertex evaluation (one communication each)"""
  reflection: float = 1.0
  expansion: float = 2.0
  contraction: float = 0.5
  shrink: float = 0.5
  initial_scale: float = 1.0
  """Edge length of the initial right-angled simplex"""

  def validate(self) -> 'NelderMeadConfig':
    if self.replications < 2:
      raise ConfigError(f"NelderMeadConfig: replications must be at least 2, got {self.replications}")
    if not (self.reflection > 0 and self.expansion > 1 and 0 < self.contraction < 1 and 0 < self.shrink < 1):
      raise ConfigError("NelderMeadConfig: need reflection > 0, expansion > 1, contraction and shrink in (0, 1)")
    if not self.initial_scale > 0:
      raise ConfigError(f"NelderMeadConfig: initial_scale must be positive, got {self.initial_scale}")
    return self

@dataclass(frozen=True)
class SpsaConfig:
  a: float = 0.5
  c: float = 0.1
  A: float = 10.0
  alpha: float = 0.602
  gamma_exp: float = 0.101
  replications: int = 10
  """Shots per perturbed point x +/- c_k*delta"""

  def validate(self) -> 'SpsaConfig':
    if not (self.a > 0 and self.c > 0):
      raise ConfigError(f"SpsaConfig: gains a and c must be positive, got a={self.a}, c={self.c}")
    if self.A < 0:
      raise ConfigError(f"SpsaConfig: A must be nonnegative, got {self.A}")
    if self.replications < 1:
      raise ConfigError(f"SpsaConfig: replications must be at least 1, got {self.replications}")
    return self
