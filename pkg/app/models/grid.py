"""Grid types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class Candidate(NamedTuple):
    """A grid pair: window {l, ..., l + w - 1}."""

    l: int  # noqa: E741
    w: int

    @property
    def end(self) -> int:
        """Last index of the window."""
        return self.l + self.w - 1


@dataclass(frozen=True)
class GridSpec:
    """The a-adic grid: scales floor(a^k) between W and n/2, all start positions 1 <= l <= n - w."""

    n: int
    min_scale: int
    decay: float
    scales: tuple[int, ...]

    @property
    def size(self) -> int:
        """Number of (l, w) pairs in the full grid."""
        return sum(self.n - w for w in self.scales)

    def positions(self, w: int) -> int:
        """Number of start positions at scale ``w``."""
        return self.n - w
