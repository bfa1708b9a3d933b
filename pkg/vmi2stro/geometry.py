#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Design-set geometry for diagonal-Hessian quadratic models.

   A design set holds 2d+1 points in the trust region B(X_k; Delta_k). Without reusable
   history it is the coordinate stencil {X_k, X_k +/- Delta*U_i}. When the history holds
   evaluated points inside the trust region, the one farthest from X_k is kept and the
   stencil is rotated so that its first axis points at it; the remaining axes are an
   orthonormal complement of that direction.

   All model algebra is carried out in the scaled, rotated frame
   z = U^T (x - X_k) / Delta, with the monomial basis Phi = {1, z_1..z_d, z_1^2/2..z_d^2/2}.
"""

from typing import Optional, List, Union, Iterable
from dataclasses import dataclass, field

import logging
import numpy as np
import scipy.linalg

from .internal_types import FloatArray, PointLike
from .constants import ORTHONORMAL_TOL, UNIT_NORM_TOL, PSEUDOINVERSE_RCOND, POINT_IDENTITY_TOL
from .exceptions import GeometryError
from .history import EvaluatedPoint, PointHistory
from .util import as_point

logger = logging.getLogger(__name__)

@dataclass
class DesignSet:
  center: FloatArray
  points: FloatArray
  """(2d+1, d) array; row 0 is the center"""
  radius: float
  basis: FloatArray
  """(d, d) orthonormal matrix whose columns are U_1..U_d"""
  reused: List[bool]
  reuse_distance: float = 0.0
  is_stencil: bool = True
  """True if this is the pure coordinate stencil (no reused point)"""
  evaluated: List[Optional[EvaluatedPoint]] = field(default_factory=list)
  """Cached evaluations aligned with points (None where not yet known)"""

  @property
  def dim(self) -> int:
    return int(self.center.shape[0])

  def __len__(self) -> int:
    return int(self.points.shape[0])

  @property
  def reused_index(self) -> Optional[int]:
    for i, r in enumerate(self.reused):
      if r:
        return i
    return None

  def copy(self) -> 'DesignSet':
    return DesignSet(
        center=self.center.copy(),
        points=self.points.copy(),
        radius=self.radius,
        basis=self.basis.copy(),
        reused=list(self.reused),
        reuse_distance=self.reuse_distance,
        is_stencil=self.is_stencil,
        evaluated=list(self.evaluated),
      )

def check_orthonormal(basis: FloatArray, tol: float=ORTHONORMAL_TOL) -> FloatArray:
  u = np.asarray(basis, dtype=np.float64)
  if u.ndim != 2 or u.shape[0] != u.shape[1]:
    raise GeometryError(f"Basis must be a square matrix, got shape {u.shape}")
  deviation = float(np.max(np.abs(u.T @ u - np.eye(u.shape[1])))) if u.size > 0 else 0.0
  if deviation > tol:
    raise GeometryError(f"Basis is not orthonormal: Gram deviation {deviation:.3g} exceeds {tol:.3g}")
  return u

def scaled_coordinates(points: FloatArray, center: FloatArray, radius: float, basis: Optional[FloatArray]=None) -> FloatArray:
  """Maps rows of points to z = U^T (x - center) / radius"""
  pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
  diff = pts - center
  if not basis is None:
    diff = diff @ basis
  return diff / radius

def interpolation_matrix(points: FloatArray, center: FloatArray, radius: float, basis: Optional[FloatArray]=None) -> FloatArray:
  """The matrix M(Phi, X) with rows [1, z, z^2/2] in the scaled rotated frame"""
  z = scaled_coordinates(points, center, radius, basis)
  return np.hstack([np.ones((z.shape[0], 1)), z, 0.5 * z * z])

def is_pseudoinvertible(matrix: FloatArray, rcond: float=PSEUDOINVERSE_RCOND) -> bool:
  """Full column rank with sigma_min/sigma_max above rcond"""
  m = np.asarray(matrix, dtype=np.float64)
  if m.shape[0] < m.shape[1]:
    return False
  sv = scipy.linalg.svdvals(m)
  if sv.size == 0 or sv[0] == 0.0:
    return False
  return bool(sv[-1] / sv[0] > rcond)

def is_poised(design: DesignSet) -> bool:
  return is_pseudoinvertible(interpolation_matrix(design.points, design.center, design.radius, design.basis))

def coordinate_stencil(center: PointLike, radius: float, basis: Optional[FloatArray]=None) -> DesignSet:
  """The stencil {X_k, X_k + Delta*U_1..U_d, X_k - Delta*U_1..U_d}.

  Args:
      center (PointLike): X_k
      radius (float): Delta > 0
      basis (Optional[FloatArray]): columns U_1..U_d; the elementary basis if None

  Raises:
      GeometryError: if radius is not positive or the basis is not orthonormal

  Returns:
      DesignSet: 2d+1 points, poised by construction
  """
  c = as_point(center)
  d = c.shape[0]
  if not radius > 0:
    raise GeometryError(f"Trust-region radius must be positive, got {radius}")
  u = np.eye(d) if basis is None else check_orthonormal(basis)
  if u.shape[0] != d:
    raise GeometryError(f"Basis dimension {u.shape[0]} does not match center dimension {d}")
  points = np.vstack([c, c + radius * u.T, c - radius * u.T])
  return DesignSet(
      center=c,
      points=points,
      radius=float(radius),
      basis=u,
      reused=[False] * (2 * d + 1),
      reuse_distance=0.0,
      is_stencil=True,
      evaluated=[None] * (2 * d + 1),
    )

def orthonormal_complement(u1: PointLike) -> FloatArray:
  """d-1 orthonormal vectors orthogonal to the unit vector u1, as columns of a (d, d-1) array.

  The complement is read off the Householder reflector that a QR factorization of u1
  builds, so it is deterministic.

  Raises:
      GeometryError: if u1 is zero or not of unit length
  """
  u = np.asarray(u1, dtype=np.float64).reshape(-1)
  norm = float(np.linalg.norm(u))
  if norm == 0.0:
    raise GeometryError("Cannot complete a basis from the zero vector")
  if abs(norm - 1.0) > UNIT_NORM_TOL:
    raise GeometryError(f"Direction must be a unit vector, got norm {norm}")
  q, _ = scipy.linalg.qr(u.reshape(-1, 1), mode='full')
  return np.ascontiguousarray(q[:, 1:])

def rotated_design_set(center: FloatArray, radius: float, reused: EvaluatedPoint) -> DesignSet:
  """The rotated stencil through a reused point:
     {X_k, X_k + P*U_1, X_k + Delta*U_2..U_d, X_k - Delta*U_1..U_d}"""
  d = center.shape[0]
  offset = reused.x - center
  p = float(np.linalg.norm(offset))
  u1 = offset / p
  # renormalize against rounding in the division
  u1 = u1 / np.linalg.norm(u1)
  basis = np.column_stack([u1, orthonormal_complement(u1)])
  plus = [center + p * u1] + [center + radius * basis[:, i] for i in range(1, d)]
  minus = [center - radius * basis[:, i] for i in range(d)]
  points = np.vstack([center] + plus + minus)
  flags = [False] * (2 * d + 1)
  flags[1] = True
  evaluated: List[Optional[EvaluatedPoint]] = [None] * (2 * d + 1)
  evaluated[1] = reused
  return DesignSet(
      center=center,
      points=points,
      radius=float(radius),
      basis=basis,
      reused=flags,
      reuse_distance=p,
      is_stencil=False,
      evaluated=evaluated,
    )

def choose_design_set(
      center: PointLike,
      radius: float,
      history: Union[PointHistory, Iterable[EvaluatedPoint], None]=None
    ) -> DesignSet:
  """Selects a design set reusing the farthest previously evaluated point in the trust region.

  Args:
      center (PointLike): the incumbent X_k
      radius (float): Delta_k > 0
      history: previously evaluated points, oldest first

  Returns:
      DesignSet: the elementary stencil if nothing but X_k lies in B(X_k; Delta_k);
                 otherwise the rotated set through the farthest prior point (oldest wins
                 ties). If that set is not poised, the next-farthest candidate is tried,
                 and the pure stencil is the last resort.
  """
  c = as_point(center)
  if not radius > 0:
    raise GeometryError(f"Trust-region radius must be positive, got {radius}")
  if history is None:
    candidates: List[EvaluatedPoint] = []
  elif isinstance(history, PointHistory):
    candidates = history.within(c, radius)
  else:
    candidates = [p for p in history if p.count > 0 and float(np.linalg.norm(p.x - c)) <= radius + POINT_IDENTITY_TOL]
  scored = []
  for seq, p in enumerate(candidates):
    dist = float(np.linalg.norm(p.x - c))
    if dist > POINT_IDENTITY_TOL:
      scored.append((-dist, p.order if p.order >= 0 else seq, seq, p))
  scored.sort(key=lambda t: (t[0], t[1], t[2]))

  for _, _, _, p in scored:
    design = rotated_design_set(c, radius, p)
    if is_poised(design):
      return design
    logger.debug("choose_design_set: reuse of %r gives an unpoised set; trying next candidate", p)

  return coordinate_stencil(c, radius)
