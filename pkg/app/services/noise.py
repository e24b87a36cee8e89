"""Noise processes of the simulation harness."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

from app.models import ArInnovation, NoiseKind
from app.schemas.experiment import NoiseSpec

# Var(t_5) = 5/3, so t_5 * sqrt(0.6) has unit variance.
T5_SCALE = math.sqrt(0.6)
T5_DF = 5


def innovation_scale(spec: NoiseSpec) -> float:
    """Standard deviation of the AR(1) innovations for N3 (before the t_5 rescaling for N4).

    ``printed`` uses sigma / sqrt(1 - phi^2); ``stationary`` uses sigma * sqrt(1 - phi^2), which
    gives the AR(1) process marginal standard deviation sigma.
    """
    factor = math.sqrt(1.0 - spec.phi**2)
    if spec.ar_innovation is ArInnovation.PRINTED:
        return spec.sigma / factor
    return spec.sigma * factor


def _ar1(innovations: np.ndarray, phi: float, burn_in: int) -> np.ndarray:
    return lfilter([1.0], [1.0, -phi], innovations)[burn_in:]


def gen_noise(spec: NoiseSpec, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw n values of the noise process.

    N1 iid N(0, sigma^2); N2 iid t_5 * sigma * sqrt(0.6); N3 Gaussian AR(1); N4 AR(1) with
    t_5 innovations. AR processes start from zero and discard ``burn_in`` leading values.

    Args:
        spec: Noise recipe
        n: Number of values
        rng: Generator to draw from; defaults to one seeded with ``spec.seed``
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    if spec.kind is NoiseKind.N1:
        return rng.normal(0.0, spec.sigma, size=n)
    if spec.kind is NoiseKind.N2:
        return rng.standard_t(T5_DF, size=n) * spec.sigma * T5_SCALE

    total = n + spec.burn_in
    scale = innovation_scale(spec)
    if spec.kind is NoiseKind.N3:
        innovations = rng.normal(0.0, scale, size=total)
    else:
        innovations = rng.standard_t(T5_DF, size=total) * scale * T5_SCALE
    return _ar1(innovations, spec.phi, spec.burn_in)
