"""Local sums and the scaled (p+1)-th difference statistic, backed by prefix sums."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidScaleError, RangeError, UnsupportedDegreeError
from app.models import DiffWeights, PrefixSums, TimeSeries


def build_prefix_sums(ts: TimeSeries) -> PrefixSums:
    """Build the cumulative-sum table of a series in one pass.

    Args:
        ts: Observed series

    Returns:
        Prefix sums with ``cumsum[0] = 0``
    """
    cumsum = np.empty(ts.n + 1, dtype=np.float64)
    cumsum[0] = 0.0
    np.cumsum(ts.values, out=cumsum[1:])
    return PrefixSums(cumsum)


def local_sum(ps: PrefixSums, start: int, length: int) -> float:
    """Sum of Y_start..Y_{start+length-1} in constant time.

    Raises:
        RangeError: If the window leaves 1..n
    """
    if length < 1 or start < 1 or start + length - 1 > ps.n:
        raise RangeError(f"window start={start}, length={length} is outside 1..{ps.n}")
    return float(ps.cumsum[start + length - 1] - ps.cumsum[start - 1])


@lru_cache(maxsize=None)
def binomials(p: int) -> DiffWeights:
    """Signed binomial weights of the (p+1)-th difference.

    Args:
        p: Polynomial degree, 0 <= p <= MAX_DEGREE

    Returns:
        Immutable weights, shared between callers

    Raises:
        UnsupportedDegreeError: If p is negative or above the cap
    """
    if p < 0 or p > settings.MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree must be in 0..{settings.MAX_DEGREE}, got {p}")
    order = p + 1
    coeffs = tuple((-1) ** (order - j) * math.comb(order, j) for j in range(order + 1))
    sumsq = sum(math.comb(order, j) ** 2 for j in range(order + 1))
    # Chunk j spans the prefix-sum boundaries j and j+1, so boundary m collects
    # coeffs[m-1] - coeffs[m].
    padded = (0, *coeffs, 0)
    boundary = tuple(padded[m] - padded[m + 1] for m in range(order + 2))
    return DiffWeights(degree=p, coeffs=coeffs, sumsq=sumsq, boundary=boundary)


def chunk_length(w: int, weights: DiffWeights) -> int:
    """Length of each local sum, floor(w / (p+2)); the remainder of the window is ignored."""
    return w // weights.n_chunks


def diff_stat(ps: PrefixSums, l: int, w: int, weights: DiffWeights) -> float:  # noqa: E741
    """Scaled (p+1)-th difference of the p+2 local sums on {l..l+w-1}.

    Uses p+3 prefix-sum lookups, so the cost does not depend on ``w``.

    Raises:
        InvalidScaleError: If w < p+2
        RangeError: If the window leaves 1..n
    """
    chunk = chunk_length(w, weights)
    if chunk < 1:
        raise InvalidScaleError(f"width {w} is too small for degree {weights.degree}")
    if l < 1 or l + w - 1 > ps.n:
        raise RangeError(f"window l={l}, w={w} is outside 1..{ps.n}")
    cumsum = ps.cumsum
    base = l - 1
    total = 0.0
    for m, g in enumerate(weights.boundary):
        total += g * cumsum[base + m * chunk]
    return float(total / math.sqrt(chunk * weights.sumsq))


def diff_stats(ps: PrefixSums, w: int, weights: DiffWeights, starts: np.ndarray) -> np.ndarray:
    """Vectorised :func:`diff_stat` for many start positions at one width.

    Args:
        ps: Prefix sums
        w: Window width
        weights: Difference weights
        starts: 1-based start indices, all with start + w - 1 <= n

    Returns:
        Array of statistics aligned with ``starts``
    """
    chunk = chunk_length(w, weights)
    if chunk < 1:
        raise InvalidScaleError(f"width {w} is too small for degree {weights.degree}")
    base = np.asarray(starts, dtype=np.int64) - 1
    if base.size and (base.min() < 0 or base.max() + w > ps.n):
        raise RangeError(f"start positions for width {w} leave 1..{ps.n}")
    cumsum = ps.cumsum
    total = np.zeros(base.shape, dtype=np.float64)
    for m, g in enumerate(weights.boundary):
        if g:
            total += g * cumsum[base + m * chunk]
    total /= math.sqrt(chunk * weights.sumsq)
    return total
