"""Point estimates of the change location inside a significant interval."""

from __future__ import annotations

import logging
from dataclasses import replace
from functools import lru_cache

import numpy as np
from numpy.polynomial import Legendre, Polynomial

from app.core.exceptions import SeriesTooShortError
from app.models import SignificantInterval, SplitFit, TimeSeries
from app.services.kernel import binomials

logger = logging.getLogger(__name__)

# Relative to the centred sum of squares; RSS values this close to the minimum count as tied.
_TIE_RTOL = 1e-9


def midpoint(interval: SignificantInterval) -> int:
    """floor((start + end) / 2)."""
    return (interval.start + interval.end) // 2


def poly_fit_rss(
    ts: TimeSeries, start: int, end: int, p: int
) -> tuple[tuple[float, ...], float]:
    """Least-squares degree-p fit in t/n over {start..end}.

    The fit is solved in a Legendre basis over the window and converted to power-basis
    coefficients afterwards.

    Returns:
        (coefficients of (t/n)^0..(t/n)^p, residual sum of squares)

    Raises:
        SeriesTooShortError: If the window has fewer than p+1 points
    """
    binomials(p)  # degree check
    count = end - start + 1
    if count < p + 1:
        raise SeriesTooShortError(f"need at least {p + 1} points for degree {p}, got {count}")
    y = ts.segment(start, end)
    u = np.arange(start, end + 1, dtype=np.float64) / ts.n
    if count == 1:
        return (float(y[0]),) + (0.0,) * p, 0.0

    series = Legendre.fit(u, y, deg=p, domain=[u[0], u[-1]])
    resid = y - series(u)
    rss = float(resid @ resid)
    coeffs = series.convert(kind=Polynomial).coef
    padded = np.zeros(p + 1)
    padded[: coeffs.size] = coeffs[: p + 1]
    return tuple(float(c) for c in padded), rss


@lru_cache(maxsize=None)
def _shifted_legendre(p: int) -> np.ndarray:
    # Row i holds the power-basis coefficients of P_i(2v - 1) on v in [0, 1].
    rows = np.zeros((p + 1, p + 1))
    for i in range(p + 1):
        unit = np.zeros(i + 1)
        unit[i] = 1.0
        coef = Legendre(unit, domain=[0.0, 1.0]).convert(kind=Polynomial).coef
        rows[i, : coef.size] = coef
    rows.setflags(write=False)
    return rows


def prefix_rss(y: np.ndarray, p: int) -> np.ndarray:
    """Residual sum of squares of the degree-p fit to every prefix ``y[:k]``.

    Entry ``k - 1`` belongs to the prefix of length k and is NaN for k <= p. Moments are
    accumulated once; each prefix works in v = s / k and the shifted Legendre basis, so the
    cost is O(len(y) * p^2) plus one small batched solve.
    """
    m = y.size
    out = np.full(m, np.nan)
    if m < p + 1:
        return out
    s = np.arange(m, dtype=np.float64)
    q = np.arange(2 * p + 1)
    powers = s[:, None] ** q
    k = np.arange(1, m + 1, dtype=np.float64)
    inv = k[:, None] ** -q.astype(np.float64)

    moments = np.cumsum(powers, axis=0) * inv
    cross = np.cumsum(powers[:, : p + 1] * y[:, None], axis=0) * inv[:, : p + 1]
    total_sq = np.cumsum(y * y)

    transform = _shifted_legendre(p)
    idx = np.add.outer(np.arange(p + 1), np.arange(p + 1))
    valid = slice(p, m)
    gram = np.einsum("ij,mjk,lk->mil", transform, moments[valid][:, idx], transform)
    rhs = cross[valid] @ transform.T
    sol = np.linalg.solve(gram, rhs[..., None])[..., 0]
    explained = np.einsum("mi,mi->m", rhs, sol)
    out[valid] = np.maximum(total_sq[valid] - explained, 0.0)
    return out


def best_split(ts: TimeSeries, interval: SignificantInterval, p: int) -> SplitFit | None:
    """RSS-minimising two-piece degree-p fit inside the interval.

    Admissible splits leave at least p+1 points on each side; ties go to the smallest eta.
    Returns None when the interval is narrower than 2(p+1)+1.
    """
    width = interval.end - interval.start + 1
    if width < 2 * (p + 1) + 1:
        return None
    y = ts.segment(interval.start, interval.end)
    spread = float(np.std(y))
    centred = (y - y.mean()) / spread if spread > 0 else y - y.mean()

    left = prefix_rss(centred, p)
    right = prefix_rss(centred[::-1].copy(), p)
    # Left piece of length k pairs with a right piece of length width - k.
    lengths = np.arange(p + 1, width - p)
    totals = left[lengths - 1] + right[width - lengths - 1]
    slack = _TIE_RTOL * max(1.0, float(centred @ centred))
    k = int(lengths[np.flatnonzero(totals <= np.min(totals) + slack)[0]])
    eta = interval.start + k - 1

    left_coeffs, left_rss = poly_fit_rss(ts, interval.start, eta, p)
    right_coeffs, right_rss = poly_fit_rss(ts, eta + 1, interval.end, p)
    return SplitFit(
        eta=eta,
        rss=left_rss + right_rss,
        left_coeffs=left_coeffs,
        right_coeffs=right_coeffs,
    )


def localize(ts: TimeSeries, interval: SignificantInterval, p: int) -> SignificantInterval:
    """Attach eta_hat (and the split fit) to an interval, falling back to the midpoint."""
    fit = best_split(ts, interval, p)
    if fit is None:
        logger.warning(
            "interval [%d, %d] too narrow for a degree-%d split, using midpoint",
            interval.start,
            interval.end,
            p,
        )
        return replace(interval, eta_hat=midpoint(interval), fit=None, midpoint_fallback=True)
    return replace(interval, eta_hat=fit.eta, fit=fit, midpoint_fallback=False)


def localize_all(
    ts: TimeSeries, intervals: tuple[SignificantInterval, ...], p: int
) -> tuple[SignificantInterval, ...]:
    """Localise each interval independently."""
    return tuple(localize(ts, interval, p) for interval in intervals)
