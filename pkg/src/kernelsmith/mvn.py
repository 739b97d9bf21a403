"""Diagonal multivariate normal sampling.

Standard normal deviates come from the Box-Muller transform driven by a
PCG64 generator; diagonal Gaussians are produced by the affine map
``mean + sqrt(var) * z``, which for a diagonal covariance is exactly the
eigen-decomposition route (the decomposition of a diagonal matrix is its
element-wise square root).

Reproducibility: :func:`stream` derives an independent PCG64 stream from a
``(seed, index)`` pair, so per-kernel sampling is deterministic regardless
of the order kernels are visited in.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DiagonalGaussian:
    mean: np.ndarray
    var: np.ndarray  # diagonal of the covariance, element-wise >= 0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        var = np.asarray(self.var, dtype=np.float64)
        if mean.shape != var.shape or mean.ndim != 1:
            raise ValueError("mean and var must be 1-D vectors of equal length")
        if (var < 0).any():
            raise ValueError("variances must be nonnegative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "var", var)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent PCG64 stream keyed by (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def sample_std_normal(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """(count, dim) matrix of independent N(0,1) draws via Box-Muller."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    total = count * dim
    if total == 0:
        return np.zeros((count, dim))
    pairs = (total + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]: keeps the log finite
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:total].reshape(count, dim)


def sample_gaussian(
    g: DiagonalGaussian, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, dim) draws from N(mean, diag(var)); zero-variance coordinates
    are exactly constant."""
    z = sample_std_normal(count, g.dim, rng)
    return g.mean + np.sqrt(g.var) * z
