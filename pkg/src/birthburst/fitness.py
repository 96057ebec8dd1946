"""The one-parameter fitness law ``f(eta) = (1 + gamma) (1 - eta)**gamma`` on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from birthburst.errors import EstimationError

CLIP_EPS = 1e-9


def _check_eta(eta):
    arr = np.asarray(eta, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise ValueError(f"fitness outside [0, 1]: {eta!r}")
    return arr


@dataclass(frozen=True)
class FitnessLaw:
    """Fitness density on [0, 1]; larger ``gamma`` means fewer fit nodes.

    ``gamma = 0`` is the uniform law. The mean fitness is ``1 / (2 + gamma)``.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma >= 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    def pdf(self, eta):
        arr = _check_eta(eta)
        out = (1.0 + self.gamma) * (1.0 - arr) ** self.gamma
        return float(out) if out.ndim == 0 else out

    def cdf(self, eta):
        arr = _check_eta(eta)
        out = 1.0 - (1.0 - arr) ** (1.0 + self.gamma)
        return float(out) if out.ndim == 0 else out

    def sample(self, u: float) -> float:
        """Inverse-transform draw from a uniform variate ``u`` in [0, 1)."""
        return 1.0 - (1.0 - u) ** (1.0 / (1.0 + self.gamma))

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return 1.0 - (1.0 - rng.random(size)) ** (1.0 / (1.0 + self.gamma))

    def mean(self) -> float:
        return 1.0 / (2.0 + self.gamma)

    @classmethod
    def fit(cls, samples: Iterable[float]) -> "FitnessLaw":
        return cls(fit_gamma(samples))


def fit_gamma(samples: Iterable[float]) -> float:
    """Closed-form maximum-likelihood ``gamma`` for fitness samples.

    Samples are clipped to ``[0, 1 - 1e-9]`` first (a max-normalised
    estimate always contains an exact 1). The estimate
    ``-n / sum(log(1 - eta)) - 1`` is floored at zero.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.size < 2:
        raise EstimationError("fit_gamma needs at least 2 samples")
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise EstimationError("fitness samples must lie in [0, 1]")
    arr = np.minimum(arr, 1.0 - CLIP_EPS)
    log_sum = float(np.sum(np.log1p(-arr)))
    if log_sum == 0.0:
        raise EstimationError("all fitness samples are zero; gamma is undefined")
    return max(0.0, -arr.size / log_sum - 1.0)


def fitness_spread(values: Iterable[float]) -> float:
    """Coefficient of variation; 0 for degenerate (all-equal) fitness."""
    arr = np.asarray(list(values), dtype=float)
    mean = float(arr.mean()) if arr.size else 0.0
    if mean == 0.0:
        return 0.0
    return float(arr.std()) / mean


__all__ = ["FitnessLaw", "fit_gamma", "fitness_spread", "CLIP_EPS"]
