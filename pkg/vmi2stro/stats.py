#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Running sample statistics (count, mean, sum of squared deviations).

   RunningStats is the only thing an oracle hands back across its boundary. Statistics
   from separate oracle calls at the same design point are combined with merge(), so a
   second-stage top-up never needs the raw draws of the first stage.
"""

from typing import Iterable, Union
from dataclasses import dataclass

import math
import numpy as np

from .internal_types import FloatArray

@dataclass(frozen=True)
class RunningStats:
  count: int = 0
  mean: float = 0.0
  m2: float = 0.0
  """Sum of squared deviations from the mean"""

  @classmethod
  def empty(cls) -> 'RunningStats':
    return cls()

  @classmethod
  def from_samples(cls, samples: Union[FloatArray, Iterable[float]]) -> 'RunningStats':
    """Computes statistics of a batch of draws.

    The batch is shifted by its first element before averaging, so a batch of identical
    values yields that value as the mean and exactly zero m2.

    Args:
        samples: 1-D array or iterable of draws

    Returns:
        RunningStats: statistics of the batch
    """
    x = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=np.float64).reshape(-1)
    n = int(x.shape[0])
    if n == 0:
      return cls()
    shift = float(x[0])
    dev = x - shift
    dmean = float(np.mean(dev))
    m2 = float(np.sum((dev - dmean) ** 2))
    return cls(count=n, mean=shift + dmean, m2=m2)

  def add(self, value: float) -> 'RunningStats':
    """Returns new statistics with one more draw folded in (Welford's update)"""
    n = self.count + 1
    delta = value - self.mean
    mean = self.mean + delta / n
    m2 = self.m2 + delta * (value - mean)
    return RunningStats(count=n, mean=mean, m2=m2)

  @property
  def insufficient(self) -> bool:
    """True if fewer than two draws are available, so the variance is unknown"""
    return self.count < 2

  @property
  def variance(self) -> float:
    """Sample variance m2/(count-1); reported as 0.0 when insufficient"""
    if self.count < 2:
      return 0.0
    return max(self.m2, 0.0) / (self.count - 1)

  @property
  def std(self) -> float:
    return math.sqrt(self.variance)

  @property
  def std_error(self) -> float:
    """Standard error of the mean, sigma_hat/sqrt(n); 0.0 for an empty sample"""
    if self.count == 0:
      return 0.0
    return self.std / math.sqrt(self.count)

  def __add__(self, other: 'RunningStats') -> 'RunningStats':
    return merge(self, other)

def merge(a: RunningStats, b: RunningStats) -> RunningStats:
  """Statistics of the concatenation of the two underlying samples.

  Uses the pairwise combination of Chan, Golub and LeVeque, which is associative up to
  rounding. An empty operand is the identity.
  """
  if a.count == 0:
    return b
  if b.count == 0:
    return a
  n = a.count + b.count
  delta = b.mean - a.mean
  if delta == 0.0:
    mean = a.mean
  else:
    mean = a.mean + delta * (b.count / n)
  m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / n)
  return RunningStats(count=n, mean=mean, m2=m2)
