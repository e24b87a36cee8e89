"""The a-adic scale set and candidate enumeration."""

from __future__ import annotations

import math
from collections.abc import Iterator

from app.core.exceptions import EmptyGridError, ParameterError
from app.models import Candidate, GridSpec

# Guards floor() against a^k landing a few ulps below an integer.
_FLOOR_EPS = 1e-9


def _floor_log(x: float, a: float) -> int:
    return math.floor(math.log(x) / math.log(a) + _FLOOR_EPS)


def build_grid(n: int, min_scale: int, decay: float, *, min_width: int = 2) -> GridSpec:
    """Build the grid G(W, a).

    Scales are the distinct values floor(a^k) for floor(log_a W) <= k <= floor(log_a(n/2)),
    kept when they lie in [max(2, min_width), n/2].

    Args:
        n: Series length
        min_scale: Minimum grid scale W
        decay: Decay parameter a
        min_width: Narrowest admissible window (p+2 for a degree-p statistic)

    Returns:
        Grid specification

    Raises:
        ParameterError: If a <= 1 or W < 2
        EmptyGridError: If n < 2W or no scale survives
    """
    if not decay > 1.0 or not math.isfinite(decay):
        raise ParameterError(f"decay must be a finite number > 1, got {decay}")
    if min_scale < 2:
        raise ParameterError(f"minimum scale must be at least 2, got {min_scale}")
    if n < 2 * min_scale:
        raise EmptyGridError(
            f"series of length {n} is shorter than twice the minimum scale {min_scale}"
        )

    k_lo = _floor_log(min_scale, decay)
    k_hi = _floor_log(n / 2, decay)
    lower = max(2, min_width)
    scales = sorted(
        {
            w
            for w in (math.floor(decay**k + _FLOOR_EPS) for k in range(k_lo, k_hi + 1))
            if lower <= w <= n // 2
        }
    )
    if not scales:
        raise EmptyGridError(f"no grid scale between {lower} and {n // 2}")
    return GridSpec(n=n, min_scale=min_scale, decay=decay, scales=tuple(scales))


def scale_ranges(grid: GridSpec, s: int, e: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(w, l_first, l_last)`` for every scale with at least one window inside {s..e}.

    Start positions satisfy s <= l, l + w - 1 <= e and l <= n - w.
    """
    for w in grid.scales:
        if w > e - s + 1:
            break
        l_last = min(e - w + 1, grid.n - w)
        if l_last >= s:
            yield w, s, l_last


def enumerate_candidates(grid: GridSpec, s: int, e: int) -> Iterator[Candidate]:
    """Stream the candidates whose window lies inside {s..e}.

    Order is width ascending, then start ascending. The stream is empty when the segment
    is narrower than the finest scale.
    """
    for w, l_first, l_last in scale_ranges(grid, s, e):
        for l in range(l_first, l_last + 1):  # noqa: E741
            yield Candidate(l, w)


def count_candidates(grid: GridSpec, s: int, e: int) -> int:
    """Number of candidates inside {s..e} without materialising them."""
    return sum(l_last - l_first + 1 for _, l_first, l_last in scale_ranges(grid, s, e))
