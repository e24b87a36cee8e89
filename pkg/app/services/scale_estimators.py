"""Noise scale estimators: generalised MAD, difference-based variance and long-run variance."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.stats import norm

from app.core.exceptions import ParameterError, SeriesTooShortError
from app.models import Estimator, ScaleEstimate, TimeSeries
from app.services.kernel import binomials

logger = logging.getLogger(__name__)

# Phi^{-1}(3/4): the MAD of a standard Gaussian.
MAD_CONSTANT = float(norm.ppf(0.75))


def _check_length(n: int, p: int, what: str = "observations") -> None:
    if n < p + 3:
        raise SeriesTooShortError(f"need at least {p + 3} {what} for degree {p}, got {n}")


def mad_sigma(ts: TimeSeries, p: int) -> ScaleEstimate:
    """Median absolute (p+1)-th difference, rescaled to a Gaussian standard deviation.

    sigma = median(|X|) / (Phi^{-1}(3/4) * sqrt(sum_j C(p+1,j)^2)).
    """
    weights = binomials(p)
    _check_length(ts.n, p)
    x = np.diff(ts.values, n=p + 1)
    value = float(np.median(np.abs(x))) / (MAD_CONSTANT * math.sqrt(weights.sumsq))
    return ScaleEstimate(value=value, method=Estimator.MAD)


def dif_sigma(ts: TimeSeries, p: int) -> ScaleEstimate:
    """Difference-based estimate: sigma^2 = mean(X^2) / sum_j C(p+1,j)^2."""
    weights = binomials(p)
    _check_length(ts.n, p)
    x = np.diff(ts.values, n=p + 1)
    variance = float(np.mean(x * x)) / weights.sumsq
    return ScaleEstimate(value=math.sqrt(variance), method=Estimator.DIF)


def default_block_size(n: int) -> int:
    """Default long-run variance block size floor(n^(1/3)), at least 1."""
    # Exact cubes such as 1000 can land just below the integer.
    return max(1, math.floor(n ** (1.0 / 3.0) + 1e-9))


def lrv_tau(ts: TimeSeries, p: int, block_size: int | None = None) -> ScaleEstimate:
    """Long-run standard deviation from (p+1)-th differences of disjoint block sums.

    Blocks hold exactly ``block_size`` points; the trailing n mod block_size points are
    dropped. tau^2 = mean(Xbar^2) / (block_size * sum_j C(p+1,j)^2).

    Raises:
        SeriesTooShortError: If fewer than p+3 full blocks fit
    """
    weights = binomials(p)
    size = default_block_size(ts.n) if block_size is None else block_size
    if size < 1:
        raise ParameterError(f"block size must be positive, got {size}")
    blocks = ts.n // size
    _check_length(blocks, p, what=f"blocks of size {size}")
    block_sums = ts.values[: blocks * size].reshape(blocks, size).sum(axis=1)
    x = np.diff(block_sums, n=p + 1)
    variance = float(np.mean(x * x)) / (size * weights.sumsq)
    return ScaleEstimate(value=math.sqrt(variance), method=Estimator.LRV, block_size=size)


def estimate_scale(
    ts: TimeSeries, p: int, estimator: Estimator, block_size: int | None = None
) -> ScaleEstimate:
    """Dispatch to the requested estimator."""
    estimator = Estimator(estimator)
    if estimator is Estimator.MAD:
        estimate = mad_sigma(ts, p)
    elif estimator is Estimator.DIF:
        estimate = dif_sigma(ts, p)
    else:
        estimate = lrv_tau(ts, p, block_size)
    logger.debug("scale estimate %s=%.6g", estimator.value, estimate.value)
    return estimate
