"""Greedy finest-scale-first interval search and the end-to-end detect pipeline."""

from __future__ import annotations

import logging
import time

import numpy as np

from app.core.exceptions import DegenerateScaleError, ParameterError
from app.models import (
    Calibration,
    DetectionResult,
    DiffWeights,
    GridSpec,
    PrefixSums,
    ScaleEstimate,
    Selection,
    SignificantInterval,
    ThresholdValue,
    TimeSeries,
)
from app.schemas.detection import DetectionConfig
from app.services.grid import build_grid, scale_ranges
from app.services.kernel import binomials, build_prefix_sums, diff_stat, diff_stats
from app.services.localize import localize_all
from app.services.scale_estimators import estimate_scale
from app.services.thresholds import compute_threshold, lambda_consistent

logger = logging.getLogger(__name__)


class GridScan:
    """Per-scale test outcomes over the full grid, evaluated lazily and at most once.

    Each scale is evaluated for every start 1 <= l <= n - w the first time any segment
    reaches it, so a whole search costs at most the size of the grid. Only the rejection
    mask is kept unless ``keep_stats`` is set, which the argmax selection needs.
    """

    def __init__(
        self,
        ps: PrefixSums,
        grid: GridSpec,
        weights: DiffWeights,
        threshold: float,
        *,
        keep_stats: bool = False,
    ) -> None:
        """Initialize the scan.

        Args:
            ps: Prefix sums of the series
            grid: Grid to scan
            weights: Difference weights of the degree
            threshold: Rejection level for |D|
            keep_stats: Keep |D| per scale instead of only the rejection mask
        """
        self.ps = ps
        self.grid = grid
        self.weights = weights
        self.threshold = threshold
        self.keep_stats = keep_stats
        self.evaluations = 0
        self._cache: dict[int, np.ndarray] = {}

    def _scale(self, w: int) -> np.ndarray:
        cached = self._cache.get(w)
        if cached is None:
            starts = np.arange(1, self.grid.positions(w) + 1)
            stats = np.abs(diff_stats(self.ps, w, self.weights, starts))
            self.evaluations += starts.size
            cached = stats if self.keep_stats else stats > self.threshold
            self._cache[w] = cached
            logger.debug("scale %d evaluated at %d starts", w, starts.size)
        return cached

    def first(self, w: int, l_first: int, l_last: int) -> int | None:
        """Leftmost rejecting start in [l_first, l_last], or None."""
        values = self._scale(w)[l_first - 1 : l_last]
        hits = values > self.threshold if self.keep_stats else values
        if not hits.any():
            return None
        return l_first + int(np.argmax(hits))

    def argmax(self, w: int, l_first: int, l_last: int) -> int | None:
        """Start in [l_first, l_last] with the largest |D| if it rejects, or None."""
        if not self.keep_stats:
            raise ParameterError("argmax selection needs a scan created with keep_stats=True")
        values = self._scale(w)[l_first - 1 : l_last]
        best = int(np.argmax(values))
        if not values[best] > self.threshold:
            return None
        return l_first + best


def greedy_interval_search(
    ps: PrefixSums,
    grid: GridSpec,
    s: int,
    e: int,
    threshold: float,
    weights: DiffWeights,
    *,
    selection: Selection = Selection.FIRST,
    scan: GridScan | None = None,
) -> list[SignificantInterval]:
    """Record disjoint significant intervals on {s..e}, finest scale first.

    On a segment the candidates are scanned by width, then start. The first rejecting window
    {l..l+w-1} is recorded and the search continues on {s..l-1} and {l+w..e}. A segment stops
    when e - s < min(W, p+1).

    Returns:
        Intervals sorted by start
    """
    if scan is None:
        scan = GridScan(
            ps, grid, weights, threshold, keep_stats=Selection(selection) is Selection.ARGMAX
        )
    pick = scan.argmax if Selection(selection) is Selection.ARGMAX else scan.first
    stop = min(grid.min_scale, weights.degree + 1)

    found: list[SignificantInterval] = []
    pending = [(s, e)]
    while pending:
        seg_s, seg_e = pending.pop()
        if seg_e - seg_s < stop:
            continue
        for w, l_first, l_last in scale_ranges(grid, seg_s, seg_e):
            l = pick(w, l_first, l_last)  # noqa: E741
            if l is None:
                continue
            stat = abs(diff_stat(ps, l, w, weights))
            found.append(SignificantInterval(start=l, end=l + w - 1, width=w, stat=stat))
            pending.append((l + w, seg_e))
            pending.append((seg_s, l - 1))
            break
    found.sort(key=lambda interval: interval.start)
    return found


def grid_max_statistic(ps: PrefixSums, grid: GridSpec, weights: DiffWeights) -> float:
    """max over the whole grid of |D|, the quantity whose exceedance is the family-wise error."""
    best = 0.0
    for w in grid.scales:
        starts = np.arange(1, grid.positions(w) + 1)
        if starts.size:
            best = max(best, float(np.abs(diff_stats(ps, w, weights, starts)).max()))
    return best


def _compose_threshold(
    n: int, min_scale: int, scale: ScaleEstimate, cfg: DetectionConfig
) -> tuple[float, ThresholdValue]:
    if cfg.threshold is not None:
        lam = cfg.threshold / scale.value if scale.value > 0 else float("inf")
        return cfg.threshold, ThresholdValue(lambda_alpha=lam, h_used=None, mode=cfg.mode)
    if scale.value <= 0:
        raise DegenerateScaleError(
            f"estimated noise scale is zero ({scale.method}); the series looks exactly "
            f"polynomial of degree {cfg.degree}"
        )
    if cfg.calibration is Calibration.CONSISTENT:
        value = lambda_consistent(n, min_scale, cfg.epsilon, cfg.mode)
    else:
        value = compute_threshold(cfg.threshold_params(n))
    return scale.value * value.lambda_alpha, value


def detect(ts: TimeSeries, cfg: DetectionConfig) -> DetectionResult:
    """Run the full pipeline: grid, scale estimate, threshold, greedy search, localisation.

    The scale and the threshold come from the whole series even when ``cfg.segment``
    restricts the search.

    Raises:
        DegenerateScaleError: If the estimated noise scale is zero
        ParameterError: For parameters that do not fit the series
    """
    started = time.perf_counter()
    n = ts.n
    weights = binomials(cfg.degree)
    min_scale = cfg.resolve_min_scale(n)
    grid = build_grid(n, min_scale, cfg.decay, min_width=weights.n_chunks)
    ps = build_prefix_sums(ts)

    if cfg.sigma is not None:
        scale = ScaleEstimate(value=cfg.sigma, method="known")
    else:
        scale = estimate_scale(ts, cfg.degree, cfg.estimator, cfg.lrv_block)
    threshold, lambda_value = _compose_threshold(n, min_scale, scale, cfg)
    logger.info(
        "threshold %.6g = scale %.6g x lambda %.6g (n=%d, W=%d, scales=%d)",
        threshold,
        scale.value,
        lambda_value.lambda_alpha,
        n,
        min_scale,
        len(grid.scales),
    )

    s, e = cfg.segment if cfg.segment is not None else (1, n)
    if e > n:
        raise ParameterError(f"segment end {e} exceeds the series length {n}")
    scan = GridScan(ps, grid, weights, threshold, keep_stats=cfg.selection is Selection.ARGMAX)
    intervals = greedy_interval_search(
        ps, grid, s, e, threshold, weights, selection=cfg.selection, scan=scan
    )
    if cfg.localize:
        intervals = list(localize_all(ts, tuple(intervals), cfg.degree))

    elapsed = time.perf_counter() - started
    logger.info(
        "found %d interval(s) with %d evaluations in %.3fs",
        len(intervals),
        scan.evaluations,
        elapsed,
    )
    return DetectionResult(
        n=n,
        intervals=tuple(intervals),
        threshold=threshold,
        lambda_value=lambda_value,
        scale=scale,
        config=cfg,
        min_scale=min_scale,
        evaluations=scan.evaluations,
        elapsed=elapsed,
    )
