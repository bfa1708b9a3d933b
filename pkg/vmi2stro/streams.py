#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Common-random-number seed streams.

   A SeedStream is a (base seed, substream index) pair. The pair is used directly as the
   128-bit key of a Philox counter-based bit generator, and the generator's counter is
   the draw index, so a stream carries no state: the same pair always produces the same
   draws, and different substreams are independent by construction of the cipher.

   Substreams are derived by hashing labels, e.g. the replication index, a design point's
   coordinates and the number of times that point has been sampled before. Two solvers
   run with the same base seed therefore see identical noise whenever they sample the same
   point for the same time.
"""

from typing import Union
from dataclasses import dataclass

import numpy as np

from .util import hash_labels

_UINT64_MASK = (1 << 64) - 1

@dataclass(frozen=True)
class SeedStream:
  base_seed: int
  substream: int = 0

  def generator(self) -> np.random.Generator:
    """A fresh generator positioned at draw index 0 of this substream"""
    key = np.array([self.base_seed & _UINT64_MASK, self.substream & _UINT64_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))

  def child(self, *labels: Union[int, str, bytes]) -> 'SeedStream':
    """Derives an independent substream identified by labels under this one"""
    return SeedStream(self.base_seed, hash_labels(self.substream, *labels))

  def replication(self, rep: int) -> 'SeedStream':
    """The root substream of macro-replication rep"""
    return self.child("rep", rep)

  def __str__(self) -> str:
    return f"SeedStream({self.base_seed}, {self.substream:#018x})"
