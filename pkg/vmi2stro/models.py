#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Stochastic quadratic models with a diagonal Hessian.

   M(x) = beta_0 + z^T G + 1/2 z^T diag(H) z,   z = U^T (x - center)

   The same class serves the objective model M_k (interpolation on a design set) and the
   variance model M_k^v (interpolation or least-squares regression on history points).
   With U the identity this is the familiar model in raw coordinates.
"""

from typing import Optional, Sequence, Union
from dataclasses import dataclass
from enum import Enum

import logging
import numpy as np
import scipy.linalg

from .internal_types import FloatArray, PointLike
from .exceptions import ModelError
from .geometry import DesignSet, interpolation_matrix, is_pseudoinvertible
from .history import EvaluatedPoint
from .util import as_point

logger = logging.getLogger(__name__)

class ModelKind(str, Enum):
  OBJECTIVE = "objective"
  VARIANCE = "variance"

@dataclass
class QuadDiagModel:
  center: FloatArray
  intercept: float
  gradient: FloatArray
  """G in the model frame; equals the raw gradient at the center when basis is the identity"""
  hessian: FloatArray
  """Diagonal entries of H in the model frame"""
  radius: float
  kind: ModelKind = ModelKind.OBJECTIVE
  basis: Optional[FloatArray] = None
  """(d, d) orthonormal frame U; None means the elementary basis"""

  @property
  def dim(self) -> int:
    return int(self.center.shape[0])

  def frame(self, x: PointLike) -> FloatArray:
    diff = as_point(x, self.dim) - self.center
    if self.basis is None:
      return diff
    return self.basis.T @ diff

  def evaluate(self, x: PointLike) -> float:
    z = self.frame(x)
    return float(self.intercept + z @ self.gradient + 0.5 * np.sum(self.hessian * z * z))

  def gradient_at(self, x: PointLike) -> FloatArray:
    """The gradient of M at x in raw coordinates"""
    z = self.frame(x)
    g = self.gradient + self.hessian * z
    if self.basis is None:
      return g
    return self.basis @ g

  def predict_variance(self, x: PointLike) -> float:
    """evaluate(x) clamped below at zero"""
    return max(0.0, self.evaluate(x))

  def __call__(self, x: PointLike) -> float:
    return self.evaluate(x)

def evaluate(model: QuadDiagModel, x: PointLike) -> float:
  return model.evaluate(x)

def gradient(model: QuadDiagModel, x: PointLike) -> FloatArray:
  return model.gradient_at(x)

def _unpack(beta: FloatArray, center: FloatArray, radius: float, basis: Optional[FloatArray], kind: ModelKind) -> QuadDiagModel:
  d = center.shape[0]
  return QuadDiagModel(
      center=center.copy(),
      intercept=float(beta[0]),
      gradient=np.asarray(beta[1:d + 1], dtype=np.float64) / radius,
      hessian=np.asarray(beta[d + 1:], dtype=np.float64) / (radius * radius),
      radius=float(radius),
      kind=kind,
      basis=None if basis is None else np.asarray(basis, dtype=np.float64).copy(),
    )

def _is_identity(basis: FloatArray) -> bool:
  return bool(np.array_equal(basis, np.eye(basis.shape[0])))

def build_interpolation(design: DesignSet, values: Sequence[float], kind: ModelKind=ModelKind.OBJECTIVE) -> QuadDiagModel:
  """Interpolates values on the 2d+1 points of a poised design set.

  Raises:
      ModelError: if the interpolation system is singular; the exception carries the
                  condition number of M(Phi, X)
  """
  v = np.asarray(values, dtype=np.float64).reshape(-1)
  a = interpolation_matrix(design.points, design.center, design.radius, design.basis)
  if a.shape[0] != a.shape[1] or v.shape[0] != a.shape[0]:
    raise ModelError(f"Interpolation needs {a.shape[1]} points and values, got {a.shape[0]} points and {v.shape[0]} values")
  if not is_pseudoinvertible(a):
    cond = float(np.linalg.cond(a))
    raise ModelError(f"Interpolation system is singular (condition number {cond:.3g})", condition_number=cond)
  beta = scipy.linalg.solve(a, v)
  basis = None if _is_identity(design.basis) else design.basis
  return _unpack(beta, design.center, design.radius, basis, kind)

def build_variance_model(
      points: Sequence[Union[EvaluatedPoint, PointLike]],
      variances: Optional[Sequence[float]]=None,
      center: Optional[PointLike]=None,
      radius: Optional[float]=None,
      basis: Optional[FloatArray]=None
    ) -> Optional[QuadDiagModel]:
  """Fits M^v to variance estimates at m >= 2d+1 points.

  With exactly 2d+1 points the model interpolates; with more it is the unweighted
  least-squares fit. The fit is done in the frame scaled by radius (default: the largest
  distance from center, which defaults to the first point).

  Args:
      points: evaluated points, or raw coordinates if variances is given
      variances: variance estimates; taken from the evaluated points if None

  Returns:
      Optional[QuadDiagModel]: the variance model, or None if M(Phi, X) is not
                               pseudoinvertible (including m < 2d+1)
  """
  if len(points) == 0:
    return None
  coords = np.stack([as_point(p.x if isinstance(p, EvaluatedPoint) else p) for p in points])
  if variances is None:
    v = np.array([p.variance if isinstance(p, EvaluatedPoint) else np.nan for p in points], dtype=np.float64)
  else:
    v = np.asarray(variances, dtype=np.float64).reshape(-1)
  if v.shape[0] != coords.shape[0] or not np.all(np.isfinite(v)):
    raise ModelError("Variance model needs one finite variance per point")
  m, d = coords.shape
  c = coords[0] if center is None else as_point(center, d)
  if radius is None:
    r = float(np.max(np.linalg.norm(coords - c, axis=1)))
    if r == 0.0:
      r = 1.0
  else:
    r = float(radius)
  if m < 2 * d + 1:
    return None
  a = interpolation_matrix(coords, c, r, basis)
  if not is_pseudoinvertible(a):
    logger.debug("build_variance_model: design matrix of %d points is rank deficient", m)
    return None
  if m == 2 * d + 1:
    beta = scipy.linalg.solve(a, v)
  else:
    beta, _, _, _ = scipy.linalg.lstsq(a, v)
  if not basis is None and _is_identity(basis):
    basis = None
  return _unpack(beta, c, r, basis, ModelKind.VARIANCE)
