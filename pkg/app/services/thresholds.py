"""Extreme-value constants and family-wise-error thresholds.

Two regimes are supported. Under iid Gaussian noise with W of order log(n) the threshold
involves the discrete-grid constant H_{1,2}, a series of squared p_inf terms. Under weakly
dependent or non-Gaussian noise with W of order sqrt(n) it involves the closed-form H_{2,2}.
Natural logarithms throughout.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import erf, ndtr

from app.core.config import settings
from app.core.exceptions import DomainError, ParameterError, SmallSampleError
from app.models import Bound, NoiseMode, ThresholdValue
from app.schemas.threshold import ThresholdDiagnostics, ThresholdParams
from app.services.kernel import binomials

logger = logging.getLogger(__name__)

# Summands of the p_inf series added one by one; the rest is an Euler-Maclaurin tail.
P_INF_DIRECT_TERMS = 4096

MIN_GAUSSIAN_N = 50

_H1_MAX_TERMS = 100_000


def c_p(p: int) -> float:
    """Local-structure constant C_p = (p+2)(1 + sum_j C(p+1,j)C(p+1,j-1) / sum_i C(p+1,i)^2)."""
    weights = binomials(p)
    order = p + 1
    cross = sum(math.comb(order, j) * math.comb(order, j - 1) for j in range(1, order + 1))
    return (p + 2) * (weights.sumsq + cross) / weights.sumsq


def _tail_bound(x: float, k: int) -> float:
    # sum_{m > k} (1/m) Phi_bar(sqrt(m x) / 2) <= sum_{m > k} exp(-m x / 8) / (2 (k + 1))
    return math.exp(-(k + 1) * x / 8.0) / (2.0 * (k + 1) * -math.expm1(-x / 8.0))


def _summand(u: float, c: float) -> float:
    return float(ndtr(-c * math.sqrt(u))) / u


def _summand_slope(u: float, c: float) -> float:
    root = math.sqrt(u)
    density = math.exp(-0.5 * c * c * u) / math.sqrt(2.0 * math.pi)
    return -density * c / (2.0 * root * u) - float(ndtr(-c * root)) / (u * u)


def _log_tail_integral(v0: float, tol: float) -> float:
    # int_{v0}^inf Phi_bar(v) / v dv; below 1 the 1/(2v) part is integrated exactly.
    def upper(v: float) -> float:
        return float(ndtr(-v)) / v

    if v0 >= 1.0:
        return quad(upper, v0, np.inf, epsabs=tol, epsrel=1e-13, limit=200)[0]
    core = quad(
        lambda v: float(erf(v / math.sqrt(2.0))) / (2.0 * v), v0, 1.0, epsabs=tol, epsrel=1e-13
    )[0]
    far = quad(upper, 1.0, np.inf, epsabs=tol, epsrel=1e-13, limit=200)[0]
    return -0.5 * math.log(v0) - core + far


def _series_tail(x: float, k: int, tol: float) -> float:
    """Euler-Maclaurin value of sum_{m > k} Phi_bar(sqrt(m x) / 2) / m."""
    c = math.sqrt(x) / 2.0
    integral = 2.0 * _log_tail_integral(c * math.sqrt(k), tol)
    slope = _summand_slope(k, c)
    third = _summand_slope(k + 1, c) - 2.0 * slope + _summand_slope(k - 1, c)
    return integral - _summand(k, c) / 2.0 - slope / 12.0 + third / 720.0


@lru_cache(maxsize=8192)
def _p_inf(x: float, term_tol: float, total_tol: float) -> float:
    k = np.arange(1, P_INF_DIRECT_TERMS + 1, dtype=np.float64)
    terms = ndtr(-np.sqrt(k * x) / 2.0) / k
    total = math.fsum(terms)
    if not (terms[-1] < term_tol and _tail_bound(x, P_INF_DIRECT_TERMS) < total_tol):
        total += _series_tail(x, P_INF_DIRECT_TERMS, total_tol / 4.0)
    return math.exp(-total)


def p_inf(x: float, *, term_tol: float | None = None, total_tol: float | None = None) -> float:
    """Discrete-grid constant p_inf(x) = exp(-sum_{k>=1} Phi_bar(sqrt(k x / 4)) / k).

    The first P_INF_DIRECT_TERMS summands are added directly. The series stops there when the
    last term is below ``term_tol`` and the geometric tail bound certifies a remainder below
    ``total_tol``; otherwise the remainder comes from an Euler-Maclaurin expansion whose
    integral is evaluated to ``total_tol``.

    Raises:
        DomainError: If x <= 0
    """
    if not x > 0:
        raise DomainError(f"p_inf is defined for x > 0, got {x}")
    if math.isinf(x):
        return 1.0
    return _p_inf(
        float(x),
        settings.P_INF_TERM_TOL if term_tol is None else term_tol,
        settings.P_INF_TOTAL_TOL if total_tol is None else total_tol,
    )


def _b(a: float, which: Bound | str) -> float:
    return 1.0 / a if Bound(which) is Bound.LOWER else 1.0


def _check_decay(a: float) -> None:
    if not (a > 1.0 and math.isfinite(a)):
        raise ParameterError(f"decay must be a finite number > 1, got {a}")


def h1(
    a: float,
    p: int,
    d: float,
    which: Bound | str = Bound.UPPER,
    *,
    term_tol: float | None = None,
    p_inf_term_tol: float | None = None,
    p_inf_total_tol: float | None = None,
) -> float:
    """Gaussian-regime constant H_{1,i} = sum_{j>=0} p_inf(2 C_p / (a^j b_i d))^2.

    Args:
        a: Decay parameter
        p: Degree
        d: Limit of W / ln(n)
        which: ``lower`` (b_1 = 1/a) or ``upper`` (b_2 = 1)
        term_tol: Stop once a summand falls below this value

    Raises:
        ParameterError: If a <= 1, d <= 0 or the series does not settle
    """
    _check_decay(a)
    if not (d > 0 and math.isfinite(d)):
        raise ParameterError(f"d must be a finite positive number, got {d}")
    tol = settings.H1_TERM_TOL if term_tol is None else term_tol
    x = 2.0 * c_p(p) / (_b(a, which) * d)
    total = 0.0
    for _ in range(_H1_MAX_TERMS):
        term = p_inf(x, term_tol=p_inf_term_tol, total_tol=p_inf_total_tol) ** 2
        total += term
        if term < tol:
            return total
        x /= a
    raise ParameterError(f"H_1 series did not settle for decay {a}; use a larger decay")


def h2(a: float, p: int, which: Bound | str = Bound.UPPER) -> float:
    """Dependent-regime constant H_{2,i} = b_i^{-1} C_p / (1 - 1/a)."""
    _check_decay(a)
    return c_p(p) / (_b(a, which) * (1.0 - 1.0 / a))


def _alpha_term(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return math.log(-2.0 / math.log1p(-alpha))


def lambda_gaussian(params: ThresholdParams, **tolerances: float) -> ThresholdValue:
    """Threshold for iid Gaussian noise with W of order log(n).

    lambda = sqrt(2 ln n) + [-ln ln n / 2 - ln(2 sqrt(pi) / H_{1,2}) + ln(-2 / ln(1-alpha))]
    / sqrt(2 ln n), with d = W / ln n.

    Raises:
        SmallSampleError: If n < 50
    """
    if params.n < MIN_GAUSSIAN_N:
        raise SmallSampleError(
            f"Gaussian threshold needs n >= {MIN_GAUSSIAN_N}, got n = {params.n}"
        )
    log_n = math.log(params.n)
    h = h1(params.decay, params.degree, params.d, Bound.UPPER, **tolerances)
    root = math.sqrt(2.0 * log_n)
    correction = (
        -0.5 * math.log(log_n) - math.log(2.0 * math.sqrt(math.pi) / h) + _alpha_term(params.alpha)
    )
    return ThresholdValue(
        lambda_alpha=root + correction / root, h_used=h, mode=NoiseMode.GAUSSIAN
    )


def lambda_dependent(params: ThresholdParams) -> ThresholdValue:
    """Threshold for dependent or non-Gaussian noise with W of order sqrt(n).

    lambda = sqrt(2 ln(n/W)) + [+ln ln(n/W) / 2 - ln(sqrt(pi) / H_{2,2}) + ln(-2 / ln(1-alpha))]
    / sqrt(2 ln(n/W)).

    Raises:
        ParameterError: If n / W <= e
    """
    ratio = params.n / params.min_scale
    if not ratio > math.e:
        raise ParameterError(f"dependent threshold needs n / W > e, got {ratio:.4g}")
    log_r = math.log(ratio)
    h = h2(params.decay, params.degree, Bound.UPPER)
    root = math.sqrt(2.0 * log_r)
    correction = (
        0.5 * math.log(log_r) - math.log(math.sqrt(math.pi) / h) + _alpha_term(params.alpha)
    )
    return ThresholdValue(
        lambda_alpha=root + correction / root, h_used=h, mode=NoiseMode.DEPENDENT
    )


def lambda_consistent(n: int, min_scale: int, epsilon: float, mode: NoiseMode) -> ThresholdValue:
    """Threshold (1 + epsilon) sqrt(2 ln(n/W)) giving consistent detection as n grows.

    Raises:
        ParameterError: If n / W <= 1 or epsilon < 0
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon must be non-negative, got {epsilon}")
    if not n > min_scale:
        raise ParameterError(f"consistent threshold needs n > W, got n={n}, W={min_scale}")
    value = (1.0 + epsilon) * math.sqrt(2.0 * math.log(n / min_scale))
    return ThresholdValue(lambda_alpha=value, h_used=None, mode=mode)


@lru_cache(maxsize=1024)
def compute_threshold(params: ThresholdParams) -> ThresholdValue:
    """Noise-scale-free threshold for the regime named by ``params.mode``."""
    if params.mode is NoiseMode.GAUSSIAN:
        value = lambda_gaussian(params)
    else:
        value = lambda_dependent(params)
    logger.debug(
        "lambda_alpha=%.6f (mode=%s, n=%d, W=%d, a=%.4f, p=%d, alpha=%.3g)",
        value.lambda_alpha,
        params.mode.value,
        params.n,
        params.min_scale,
        params.decay,
        params.degree,
        params.alpha,
    )
    return value


def threshold_diagnostics(params: ThresholdParams) -> ThresholdDiagnostics:
    """Evaluate every constant entering the thresholds together with lambda_alpha."""
    threshold = compute_threshold(params)
    d = params.d
    return ThresholdDiagnostics(
        c_p=c_p(params.degree),
        h1_lower=h1(params.decay, params.degree, d, Bound.LOWER),
        h1_upper=h1(params.decay, params.degree, d, Bound.UPPER),
        h2_lower=h2(params.decay, params.degree, Bound.LOWER),
        h2_upper=h2(params.decay, params.degree, Bound.UPPER),
        lambda_alpha=threshold.lambda_alpha,
        d=d if params.mode is NoiseMode.GAUSSIAN else None,
        mode=params.mode,
        params=params,
    )
