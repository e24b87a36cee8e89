"""Series-level numeric types: the observations, their prefix sums and the difference weights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from app.core.exceptions import ParameterError


def _frozen_array(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Observed values Y_1..Y_n.

    Indices exposed by the services are 1-based; ``values[t - 1]`` holds Y_t.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.values)
        if arr.ndim != 1:
            raise ParameterError(f"series must be one-dimensional, got shape {arr.shape}")
        if arr.size < 1:
            raise ParameterError("series must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("series values must be finite")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        """Series length."""
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def segment(self, start: int, end: int) -> np.ndarray:
        """Return Y_start..Y_end (1-based, inclusive) as a read-only view."""
        return self.values[start - 1 : end]


@dataclass(frozen=True, eq=False)
class PrefixSums:
    """Cumulative sums with a leading zero: ``cumsum[t] = Y_1 + ... + Y_t``."""

    cumsum: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "cumsum", _frozen_array(self.cumsum))

    @property
    def n(self) -> int:
        """Length of the underlying series."""
        return int(self.cumsum.size - 1)


@dataclass(frozen=True)
class DiffWeights:
    """Signed binomial weights of the (p+1)-th difference.

    ``coeffs[j] = (-1)^(p+1-j) * C(p+1, j)`` for j = 0..p+1 and
    ``sumsq = sum_j C(p+1, j)^2``.
    """

    degree: int
    coeffs: tuple[int, ...]
    sumsq: int
    # Weights on the p+3 prefix sums bounding the chunks, see kernel.diff_stat.
    boundary: tuple[int, ...] = field(repr=False)

    @property
    def n_chunks(self) -> int:
        """Number of local sums per window (p + 2)."""
        return self.degree + 2
