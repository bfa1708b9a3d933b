#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Sample-size rules.

   streaming_adaptive is the classical adaptive rule: keep sampling in batches (one
   communication each) until sigma_hat(x, n)/sqrt(n) <= kappa*Delta^2/sqrt(lambda_k).

   The two-stage rules make at most two oracle calls for a new point: a first stage
   whose size comes from lambda_k (two_stage_lambda) or from the variance model
   (two_stage_varmodel), then one top-up sized from the first-stage variance estimate.
   two_stage_hybrid picks between them. reevaluate tops up a previously evaluated point
   with at most one call.

   All functions sample through the OracleHandle, merge new statistics into the
   EvaluatedPoint they are given, and return it. The stream argument is the run's root
   stream; each call uses the point's own substream for its next visit.
"""

from typing import Optional, Union
from dataclasses import replace

import logging
import math

from .internal_types import PointLike
from .config.params import SamplingParams, Strategy
from .history import EvaluatedPoint
from .models import QuadDiagModel
from .oracle import OracleHandle
from .streams import SeedStream
from .util import ceil_int

logger = logging.getLogger(__name__)

def lambda_schedule(k: int, params: Optional[SamplingParams]=None) -> int:
  """The minimum sample size lambda_k at iteration k"""
  if params is None:
    params = SamplingParams()
  return params.lambda_k(k)

def _as_evaluated(x: Union[EvaluatedPoint, PointLike]) -> EvaluatedPoint:
  return x if isinstance(x, EvaluatedPoint) else EvaluatedPoint(x)

def _draw(oracle: OracleHandle, point: EvaluatedPoint, n: int, k: int, stream: SeedStream):
  stats = oracle.sample(point.x, n, point.next_stream(stream))
  point.absorb(stats)
  point.iteration = k

def _capped(n: int, params: SamplingParams, point: EvaluatedPoint) -> int:
  if n > params.n_max:
    point.budget_capped = True
    return params.n_max
  return n

def _top_up(oracle: OracleHandle, point: EvaluatedPoint, target: int, k: int, stream: SeedStream) -> int:
  extra = target - point.count
  if extra > 0:
    _draw(oracle, point, extra, k, stream)
    return extra
  return 0

def _variance_ratio(variance: float, delta: float, params: SamplingParams) -> float:
  return variance / (params.kappa * delta ** 4)

def streaming_adaptive(
      oracle: OracleHandle,
      x: Union[EvaluatedPoint, PointLike],
      delta: float,
      k: int,
      params: SamplingParams,
      stream: SeedStream
    ) -> EvaluatedPoint:
  """Samples in increments until sigma_hat/sqrt(n) <= kappa*Delta^2/sqrt(lambda_k).

  The first call brings the point up to lambda_k samples; each later increment is
  params.batch_size(k) samples, and every increment is one communication. Sampling
  stops at n_max with the point flagged budget_capped.
  """
  point = _as_evaluated(x)
  lam = params.lambda_k(k)
  batch = params.batch_size(k)
  threshold = params.kappa * delta * delta / math.sqrt(lam)
  if point.count < lam:
    _draw(oracle, point, min(lam, params.n_max) - point.count, k, stream)
  while True:
    stats = point.stats
    if not stats.insufficient and stats.std_error <= threshold * (1.0 + 1.0e-12):
      break
    if point.count >= params.n_max:
      point.budget_capped = True
      logger.debug("streaming_adaptive: n_max=%d reached at %r", params.n_max, point)
      break
    _draw(oracle, point, min(batch, params.n_max - point.count), k, stream)
  return point

def two_stage_lambda(
      oracle: OracleHandle,
      x: Union[EvaluatedPoint, PointLike],
      delta: float,
      k: int,
      params: SamplingParams,
      stream: SeedStream
    ) -> EvaluatedPoint:
  """First stage lambda_k, then N_k = lambda_k*max{1, sigma_hat^2/(kappa*Delta^4)}"""
  point = _as_evaluated(x)
  lam = params.lambda_k(k)
  _draw(oracle, point, lam, k, stream)
  stage1_var = point.variance
  target = _capped(ceil_int(lam * max(1.0, _variance_ratio(stage1_var, delta, params))), params, point)
  added = _top_up(oracle, point, target, k, stream)
  logger.debug("two_stage_lambda: lambda=%d var1=%.4g N=%d (+%d)", lam, stage1_var, point.count, added)
  return point

def two_stage_varmodel(
      oracle: OracleHandle,
      x: Union[EvaluatedPoint, PointLike],
      delta: float,
      k: int,
      params: SamplingParams,
      varmodel: Optional[QuadDiagModel],
      stream: SeedStream
    ) -> EvaluatedPoint:
  """First stage lambda_k*max{1, M^v(x)/(kappa*Delta^4)}, then
     N_k = max{N_k1, lambda_k*sigma_hat^2/(kappa*Delta^4)}"""
  if varmodel is None:
    return two_stage_lambda(oracle, x, delta, k, params, stream)
  point = _as_evaluated(x)
  lam = params.lambda_k(k)
  predicted = varmodel.predict_variance(point.x)
  n1 = _capped(ceil_int(lam * max(1.0, _variance_ratio(predicted, delta, params))), params, point)
  _draw(oracle, point, n1, k, stream)
  stage1_var = point.variance
  target = _capped(max(n1, ceil_int(lam * _variance_ratio(stage1_var, delta, params))), params, point)
  added = _top_up(oracle, point, target, k, stream)
  logger.debug("two_stage_varmodel: predicted=%.4g N1=%d var1=%.4g N=%d (+%d)", predicted, n1, stage1_var, point.count, added)
  return point

def hybrid_uses_lambda(
      x: PointLike,
      delta: float,
      params: SamplingParams,
      varmodel: Optional[QuadDiagModel],
      incumbent_variance: Optional[float]
    ) -> bool:
  """True when the variance model's prediction at x looks implausibly high:
     M^v(x) >= sigma_hat^2(X_k) + c_v*Delta"""
  if varmodel is None or incumbent_variance is None:
    return True
  return varmodel.evaluate(x) >= incumbent_variance + params.c_v * delta

def two_stage_hybrid(
      oracle: OracleHandle,
      x: Union[EvaluatedPoint, PointLike],
      delta: float,
      k: int,
      params: SamplingParams,
      varmodel: Optional[QuadDiagModel],
      incumbent_variance: Optional[float],
      stream: SeedStream
    ) -> EvaluatedPoint:
  point = _as_evaluated(x)
  if hybrid_uses_lambda(point.x, delta, params, varmodel, incumbent_variance):
    return two_stage_lambda(oracle, point, delta, k, params, stream)
  return two_stage_varmodel(oracle, point, delta, k, params, varmodel, stream)

def reevaluate(
      oracle: OracleHandle,
      prior: EvaluatedPoint,
      delta: float,
      k: int,
      params: SamplingParams,
      stream: SeedStream
    ) -> EvaluatedPoint:
  """N_k = max{N_{k-1}, lambda_k, lambda_k*sigma_hat^2(x, N_{k-1})/(kappa*Delta^4)}; at most one top-up"""
  lam = params.lambda_k(k)
  target = max(prior.count, lam, ceil_int(lam * _variance_ratio(prior.variance, delta, params)))
  if target > params.n_max:
    prior.budget_capped = True
    target = max(params.n_max, prior.count)
  added = _top_up(oracle, prior, target, k, stream)
  if added > 0:
    logger.debug("reevaluate: %r topped up by %d", prior, added)
  return prior

def estimate(
      oracle: OracleHandle,
      point: EvaluatedPoint,
      delta: float,
      k: int,
      params: SamplingParams,
      strategy: Strategy,
      stream: SeedStream,
      varmodel: Optional[QuadDiagModel]=None,
      incumbent_variance: Optional[float]=None
    ) -> EvaluatedPoint:
  """Estimates a design point with the configured strategy: reevaluation for points with
     prior samples, the selected two-stage rule (or the streaming rule) otherwise."""
  if not strategy.is_two_stage:
    return streaming_adaptive(oracle, point, delta, k, params, stream)
  if point.count > 0:
    return reevaluate(oracle, point, delta, k, params, stream)
  if strategy == Strategy.LAMBDA:
    return two_stage_lambda(oracle, point, delta, k, params, stream)
  if strategy == Strategy.VARMODEL:
    return two_stage_varmodel(oracle, point, delta, k, params, varmodel, stream)
  return two_stage_hybrid(oracle, point, delta, k, params, varmodel, incumbent_variance, stream)

def calibrate_kappa(
      oracle: OracleHandle,
      point: EvaluatedPoint,
      delta_0: float,
      params: SamplingParams,
      stream: SeedStream
    ) -> SamplingParams:
  """Scales kappa to the start: kappa = |F_hat(X_0)|/Delta_0^2 from lambda_0 shots at X_0.

  The shots stay with the point, which is left marked as sampled before iteration 0 so
  the first iteration reevaluates it under the calibrated kappa. params is returned
  unchanged if the estimate is zero.
  """
  if point.count == 0:
    _draw(oracle, point, params.lambda_k(0), -1, stream)
  scale = abs(point.mean) / (delta_0 * delta_0)
  if not (scale > 0 and math.isfinite(scale)):
    logger.info("calibrate_kappa: start estimate %.6g gives no scale; kappa stays %.6g", point.mean, params.kappa)
    return params
  logger.info("calibrate_kappa: kappa %.6g -> %.6g from F_hat(X_0)=%.6g", params.kappa, scale, point.mean)
  return replace(params, kappa=scale)
