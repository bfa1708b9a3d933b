#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Exceptions defined by this package"""

from typing import Optional

class Vmi2stroError(Exception):
  """Base class for all error exceptions defined by this package."""
  pass

class OracleDomainError(Vmi2stroError, ValueError):
  """Exception indicating that an oracle was asked to sample at a nonfinite point."""
  pass

class OracleArgumentError(Vmi2stroError, ValueError):
  """Exception indicating an invalid oracle request, e.g., a shot count of zero."""
  pass

class BudgetExhaustedError(Vmi2stroError):
  """Exception indicating that an oracle call would exceed the run's cost budget."""
  pass

class GeometryError(Vmi2stroError):
  """Exception indicating that a design set could not be constructed from the given basis or direction."""
  pass

class ModelError(Vmi2stroError):
  """Exception indicating that an interpolation system is singular."""
  condition_number: Optional[float]

  def __init__(self, msg: str, condition_number: Optional[float]=None):
    super().__init__(msg)
    self.condition_number = condition_number

class ProblemError(Vmi2stroError):
  """Exception indicating an invalid problem instance or problem argument."""
  pass

class GraphFormatError(ProblemError):
  """Exception indicating a malformed graph edge-list file."""
  pass

class ConfigError(Vmi2stroError):
  """Exception indicating an invalid configuration key, value, or identifier."""
  pass
