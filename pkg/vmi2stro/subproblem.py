#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Exact minimization of a diagonal quadratic over a Euclidean ball.

   For the model m(s) = g^T s + 1/2 s^T diag(h) s and ||s|| <= Delta, the global
   minimizer is s(lam) = -g/(h + lam) for the smallest lam >= max(0, -min h) with
   ||s(lam)|| <= Delta, with equality unless lam = 0. The multiplier is found by a
   safeguarded Newton iteration on the secular equation 1/Delta - 1/||s(lam)|| = 0,
   falling back to bisection whenever Newton leaves the bracket. When g vanishes on
   the coordinates of the most negative curvature (the hard case) the step is completed
   along one of those coordinates.
"""

from typing import Tuple
from dataclasses import dataclass

import logging
import math
import numpy as np

from .internal_types import FloatArray
from .constants import SECULAR_MAX_ITERATIONS, SECULAR_TOL, STEP_NORM_SLACK
from .models import QuadDiagModel

logger = logging.getLogger(__name__)

@dataclass
class TrStep:
  step: FloatArray
  """Step s in raw coordinates; the candidate is center + s"""
  predicted_reduction: float
  """R_k = M(center) - M(center + s)"""
  on_boundary: bool
  multiplier: float = 0.0

def _model_decrease(g: FloatArray, h: FloatArray, s: FloatArray) -> float:
  return float(-(g @ s + 0.5 * np.sum(h * s * s)))

def _secular_step(g: FloatArray, h: FloatArray, lam: float) -> FloatArray:
  return -g / (h + lam)

def solve_diagonal(g: FloatArray, h: FloatArray, delta: float) -> Tuple[FloatArray, float, bool]:
  """Minimizes g^T s + 1/2 s^T diag(h) s over ||s|| <= delta.

  Returns:
      Tuple[FloatArray, float, bool]: (s, multiplier lam, on_boundary)
  """
  g = np.asarray(g, dtype=np.float64)
  h = np.asarray(h, dtype=np.float64)
  d = g.shape[0]
  if d == 0:
    return np.zeros(0), 0.0, False
  hmin = float(np.min(h))
  lam_lo = max(0.0, -hmin)

  # Coordinates that become singular at lam_lo
  flat = (h + lam_lo) <= 0.0
  if not np.any(flat & (g != 0.0)):
    s0 = np.zeros(d)
    live = ~flat
    s0[live] = -g[live] / (h[live] + lam_lo)
    norm0 = float(np.linalg.norm(s0))
    if norm0 <= delta:
      if lam_lo == 0.0:
        # interior (or zero-curvature directions, which cannot improve the value)
        return s0, 0.0, False
      # hard case: fill the remaining length along the most negative curvature
      j = int(np.flatnonzero(flat)[0])
      tau = math.sqrt(max(delta * delta - norm0 * norm0, 0.0))
      s0[j] = tau
      return s0, lam_lo, True

  gnorm = float(np.linalg.norm(g))
  lo = lam_lo
  hi = lam_lo + gnorm / delta
  lam = 0.5 * (lo + hi)
  if lam <= lo:
    lam = hi

  s = _secular_step(g, h, lam)
  for _ in range(SECULAR_MAX_ITERATIONS):
    s = _secular_step(g, h, lam)
    snorm = float(np.linalg.norm(s))
    if abs(snorm - delta) <= SECULAR_TOL * max(1.0, delta):
      break
    if snorm > delta:
      lo = lam
    else:
      hi = lam
    # psi(lam) = 1/delta - 1/||s||; psi'(lam) = -sum(g^2/(h+lam)^3)/||s||^3
    dpsi = -float(np.sum(g * g / (h + lam) ** 3)) / snorm ** 3
    psi = 1.0 / delta - 1.0 / snorm
    trial = lam - psi / dpsi if dpsi != 0.0 else math.nan
    if not (lo < trial <= hi):
      trial = 0.5 * (lo + hi)
    if trial == lam or hi - lo <= SECULAR_TOL * max(1.0, hi):
      lam = trial
      s = _secular_step(g, h, lam)
      break
    lam = trial

  snorm = float(np.linalg.norm(s))
  if snorm > delta:
    s = s * (delta / snorm)
  return s, lam, True

def solve(model: QuadDiagModel, delta: float) -> TrStep:
  """Global minimizer of model over B(center; delta).

  Args:
      model (QuadDiagModel): the model to minimize
      delta (float): trust-region radius > 0

  Returns:
      TrStep: step, predicted reduction and boundary flag
  """
  if not delta > 0:
    raise ValueError(f"Trust-region radius must be positive, got {delta}")
  z, lam, boundary = solve_diagonal(model.gradient, model.hessian, delta)
  reduction = _model_decrease(model.gradient, model.hessian, z)
  if reduction < 0.0:
    # only reachable through rounding when the optimum is s = 0
    z = np.zeros_like(z)
    reduction = 0.0
    boundary = False
  step = z if model.basis is None else model.basis @ z
  norm = float(np.linalg.norm(step))
  if norm > delta + STEP_NORM_SLACK:
    step = step * (delta / norm)
  return TrStep(step=step, predicted_reduction=reduction, on_boundary=boundary, multiplier=lam)
