#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Evaluated design points and the run's evaluation history (the filtration as a point cache)."""

from typing import Optional, List, Dict, Iterator

import numpy as np

from .internal_types import FloatArray, PointLike
from .constants import POINT_IDENTITY_TOL
from .stats import RunningStats, merge
from .streams import SeedStream
from .util import as_point, hash_point, format_point

class EvaluatedPoint:
  """A design point with its accumulated sample statistics.

  visits counts the oracle calls made at this point so far; it indexes the point's
  next common-random-number substream.
  """
  x: FloatArray
  stats: RunningStats
  visits: int
  order: int
  """Position in the history; lower is older"""
  budget_capped: bool
  iteration: int
  """Iteration at which the statistics were last updated"""

  def __init__(self, x: PointLike, stats: Optional[RunningStats]=None, order: int=-1):
    self.x = as_point(x)
    self.x.setflags(write=False)
    self.stats = RunningStats() if stats is None else stats
    self.visits = 0
    self.order = order
    self.budget_capped = False
    self.iteration = -1

  @property
  def count(self) -> int:
    return self.stats.count

  @property
  def mean(self) -> float:
    return self.stats.mean

  @property
  def variance(self) -> float:
    return self.stats.variance

  def next_stream(self, root: SeedStream) -> SeedStream:
    """The substream for this point's next oracle call"""
    return root.child(hash_point(self.x), self.visits)

  def absorb(self, stats: RunningStats):
    """Merges statistics of a new oracle call into this point"""
    self.stats = merge(self.stats, stats)
    self.visits += 1

  def __repr__(self) -> str:
    return f"<EvaluatedPoint {format_point(self.x)} n={self.count} mean={self.mean:.6g} var={self.variance:.6g}>"

class PointHistory:
  """All points evaluated during a run, in evaluation order.

  Lookup is by exact coordinates first, then by a Euclidean tolerance scan, so a point
  recomputed with rounding noise still finds its prior statistics.
  """
  _points: List[EvaluatedPoint]
  _by_key: Dict[bytes, EvaluatedPoint]
  tol: float

  def __init__(self, tol: float=POINT_IDENTITY_TOL):
    self._points = []
    self._by_key = {}
    self.tol = tol

  def __len__(self) -> int:
    return len(self._points)

  def __iter__(self) -> Iterator[EvaluatedPoint]:
    return iter(self._points)

  def __contains__(self, point: object) -> bool:
    if not isinstance(point, EvaluatedPoint):
      return False
    return 0 <= point.order < len(self._points) and self._points[point.order] is point

  def find(self, x: PointLike) -> Optional[EvaluatedPoint]:
    xp = as_point(x)
    result = self._by_key.get(hash_point(xp), None)
    if result is None and len(self._points) > 0:
      coords = self.coordinates()
      if coords.shape[1] == xp.shape[0]:
        dist = np.linalg.norm(coords - xp, axis=1)
        i = int(np.argmin(dist))
        if dist[i] <= self.tol:
          result = self._points[i]
    return result

  def get_or_create(self, x: PointLike) -> EvaluatedPoint:
    """Returns the cached point at x, or a new unevaluated one (not yet added)"""
    result = self.find(x)
    if result is None:
      result = EvaluatedPoint(x)
    return result

  def add(self, point: EvaluatedPoint) -> EvaluatedPoint:
    if point in self:
      return point
    point.order = len(self._points)
    self._points.append(point)
    self._by_key[hash_point(point.x)] = point
    return point

  def coordinates(self) -> FloatArray:
    if len(self._points) == 0:
      return np.zeros((0, 0))
    return np.stack([p.x for p in self._points])

  def within(self, center: PointLike, radius: float) -> List[EvaluatedPoint]:
    """Evaluated points in the closed ball B(center; radius), oldest first"""
    c = as_point(center)
    if len(self._points) == 0:
      return []
    dist = np.linalg.norm(self.coordinates() - c, axis=1)
    return [p for p, r in zip(self._points, dist) if r <= radius + self.tol and p.count > 0]
