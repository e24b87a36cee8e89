"""Noise-free test signals."""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from numpy.polynomial import polynomial as P

from app.core.config import settings
from app.core.exceptions import SignalSpecError
from app.models import SignalKind, TimeSeries
from app.schemas.experiment import SignalSpec

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8)
def load_signal_defaults(path: Path | None = None) -> dict[str, Any]:
    """Read the signals file (``settings.SIGNALS_FILE`` unless given).

    Raises:
        SignalSpecError: If the file is missing or not a mapping
    """
    path = Path(path or settings.SIGNALS_FILE)
    try:
        with path.open(encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise SignalSpecError(f"cannot read signals file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SignalSpecError(f"signals file {path} must hold a mapping")
    return data


def _section(kind: SignalKind) -> dict[str, Any]:
    section = load_signal_defaults().get(kind.value)
    if not isinstance(section, dict):
        raise SignalSpecError(f"signals file has no '{kind.value}' section")
    return section


def _blocks(spec: SignalSpec) -> np.ndarray:
    cfg = _section(SignalKind.BLOCKS)
    ref = int(cfg["reference_length"])
    n = spec.n or int(cfg["length"])
    if n > ref:
        raise SignalSpecError(f"blocks is defined for n <= {ref}, got {n}")
    t = np.arange(1, ref + 1) / ref
    raw = np.zeros(ref)
    for loc, height in zip(cfg["locations"], cfg["heights"], strict=True):
        raw += height * np.heaviside(t - loc, 0.0)
    target = spec.amplitude or float(cfg["target_sd"])
    raw *= target / raw.std(ddof=1)
    return raw[:n]


def _waves(spec: SignalSpec) -> np.ndarray:
    cfg = _section(SignalKind.WAVES)
    n = spec.n or int(cfg["length"])
    theta = spec.change_points or list(cfg["change_points"])
    amplitude = spec.amplitude or float(cfg["amplitude"])
    knots = np.array([0, *theta, n], dtype=np.float64)
    levels = np.where(np.arange(knots.size) % 2 == 1, amplitude, 0.0)
    return np.interp(np.arange(1, n + 1), knots, levels)


def _hills(spec: SignalSpec) -> np.ndarray:
    cfg = _section(SignalKind.HILLS)
    n = spec.n or int(cfg["length"])
    theta = spec.change_points or list(cfg["change_points"])
    height = spec.amplitude or float(cfg["height"])
    knots = np.array([0, *theta, n], dtype=np.float64)
    t = np.arange(1, n + 1, dtype=np.float64)
    seg = np.clip(np.searchsorted(knots, t, side="left") - 1, 0, knots.size - 2)
    u = (t - knots[seg]) / (knots[seg + 1] - knots[seg])
    return height * 4.0 * u * (1.0 - u)


def _custom(spec: SignalSpec) -> np.ndarray:
    if spec.n is None or spec.coefficients is None:
        raise SignalSpecError("custom signals need n and coefficients")
    n = spec.n
    theta = spec.change_points or []
    if len(spec.coefficients) != len(theta) + 1:
        raise SignalSpecError(
            f"{len(theta)} change points need {len(theta) + 1} coefficient lists, "
            f"got {len(spec.coefficients)}"
        )
    edges = [1, *theta, n + 1]
    t = np.arange(1, n + 1, dtype=np.float64)
    values = np.empty(n)
    for k, coeffs in enumerate(spec.coefficients):
        if not coeffs:
            raise SignalSpecError(f"segment {k} has no coefficients")
        lo, hi = edges[k] - 1, edges[k + 1] - 1
        values[lo:hi] = P.polyval(t[lo:hi] / n, coeffs)
    return values


def _check(spec: SignalSpec) -> None:
    n = spec.n
    if spec.kind in (SignalKind.NONE, SignalKind.CUSTOM) and n is None:
        raise SignalSpecError(f"{spec.kind.value} signals need n")
    if spec.change_points and n is not None:
        if spec.change_points[0] < 2 or spec.change_points[-1] > n - 1:
            raise SignalSpecError(f"change points must lie in 2..{n - 1}")


def gen_signal(spec: SignalSpec) -> TimeSeries:
    """Noise-free mean vector of a test signal.

    Raises:
        SignalSpecError: If the spec is malformed
    """
    _check(spec)
    if spec.kind is SignalKind.NONE:
        values = np.zeros(spec.n)
    elif spec.kind is SignalKind.BLOCKS:
        values = _blocks(spec)
    elif spec.kind is SignalKind.WAVES:
        values = _waves(spec)
    elif spec.kind is SignalKind.HILLS:
        values = _hills(spec)
    else:
        values = _custom(spec)
    return TimeSeries(values)


def change_points(spec: SignalSpec) -> tuple[int, ...]:
    """True change locations of a signal (first index of each new segment or kink index)."""
    if spec.kind is SignalKind.NONE:
        return ()
    if spec.kind is SignalKind.BLOCKS:
        values = gen_signal(spec).values
        return tuple(int(i) + 2 for i in np.flatnonzero(np.diff(values)))
    if spec.change_points is not None:
        return tuple(spec.change_points)
    if spec.kind is SignalKind.CUSTOM:
        return ()
    return tuple(int(c) for c in _section(spec.kind)["change_points"])


def signal_degree(spec: SignalSpec) -> int:
    """Polynomial degree of the pieces of a signal."""
    if spec.kind is SignalKind.NONE:
        return 0
    if spec.kind is SignalKind.CUSTOM:
        return max(len(c) for c in spec.coefficients or [[0.0]]) - 1
    return int(_section(spec.kind).get("degree", 0))
