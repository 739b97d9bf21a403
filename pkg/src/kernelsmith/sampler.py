"""Draw new instances from a fitted generator.

Each kernel receives an integer quota from its weight share within its
class and the requested class distribution, then draws diagonal-Gaussian
batches around its center, rejecting rows that leave the unit cube, until
the quota is filled. Rows keep the kernel's class, are pooled in kernel
order, and are decoded back to the original scales and encodings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mvn
from .dataset import Dataset, require_same_schema
from .errors import ClassWithoutKernel, RejectionExhausted
from .generator import GeneratorSpec
from .preprocess import EncodedDataset, decode

EQUAL_TOL = 1e-9


@dataclass(frozen=True)
class SamplingConfig:
    size: int
    class_distribution: np.ndarray | None = None  # default: generator empirical
    var: str = "estimated"  # | "silverman"
    default_spread: float = 0.05
    seed: int = 0
    oversample_factor: float = 2.0
    max_retries: int = 50

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be >= 1")
        if self.var not in ("estimated", "silverman"):
            raise ValueError(f"unknown var mode {self.var!r}")
        if self.default_spread < 0:
            raise ValueError("default_spread must be >= 0")
        if self.oversample_factor < 1:
            raise ValueError("oversample_factor must be >= 1")
        if self.class_distribution is not None:
            p = np.asarray(self.class_distribution, dtype=np.float64)
            if (p < 0).any():
                raise ValueError("class distribution entries must be >= 0")
            if abs(p.sum() - 1.0) > 1e-9:
                raise ValueError("class distribution must sum to 1")
            object.__setattr__(self, "class_distribution", p)


def _largest_remainder(quotas: np.ndarray, budget: int) -> np.ndarray:
    """Integerize nonnegative quotas to hit the budget exactly.

    Floors first, then hands the shortfall to the largest remainders;
    equal remainders favor the lower index.
    """
    floors = np.floor(quotas).astype(np.int64)
    extras = budget - int(floors.sum())
    if extras > 0:
        order = np.argsort(-(quotas - floors), kind="stable")
        floors[order[:extras]] += 1
    return floors


def allocate(spec: GeneratorSpec, cfg: SamplingConfig) -> np.ndarray:
    """Per-kernel draw counts honoring the class distribution exactly."""
    p = cfg.class_distribution
    if p is None:
        p = spec.class_distribution
    p = np.asarray(p, dtype=np.float64)
    if p.shape[0] != spec.class_count:
        raise ValueError(
            f"class distribution has {p.shape[0]} entries, expected {spec.class_count}"
        )
    class_totals = _largest_remainder(p * cfg.size, cfg.size)
    weights = np.array([k.weight for k in spec.kernels], dtype=np.float64)
    classes = np.array([k.class_index for k in spec.kernels], dtype=np.int64)
    counts = np.zeros(len(spec.kernels), dtype=np.int64)
    for c in range(spec.class_count):
        members = np.flatnonzero(classes == c)
        if p[c] > 0 and members.size == 0:
            raise ClassWithoutKernel(
                f"class {spec.class_categories[c]!r} has positive probability "
                "but no kernel"
            )
        if members.size == 0 or class_totals[c] == 0:
            continue
        share = weights[members] / weights[members].sum()
        quotas = share * (p[c] * cfg.size)
        counts[members] = _largest_remainder(quotas, int(class_totals[c]))
    return counts


def silverman_width(spread: np.ndarray, n_k: int, a: int) -> np.ndarray:
    """Rule-of-thumb bandwidth: (4/(a+2))^(1/(a+4)) * n^(-1/(a+4)) * spread."""
    if n_k < 1:
        raise ValueError("n_k must be >= 1")
    if a < 1:
        raise ValueError("a must be >= 1")
    factor = (4.0 / (a + 2.0)) ** (1.0 / (a + 4.0)) * float(n_k) ** (-1.0 / (a + 4.0))
    return factor * np.asarray(spread, dtype=np.float64)


def _kernel_sd(spec: GeneratorSpec, index: int, cfg: SamplingConfig) -> np.ndarray:
    kernel = spec.kernels[index]
    if cfg.var == "estimated":
        return np.where(kernel.spread > 0, kernel.spread, cfg.default_spread)
    return silverman_width(kernel.spread, kernel.weight, spec.meta.width)


def _draw_kernel(
    spec: GeneratorSpec, index: int, need: int, cfg: SamplingConfig
) -> np.ndarray:
    kernel = spec.kernels[index]
    sd = _kernel_sd(spec, index, cfg)
    gaussian = mvn.DiagonalGaussian(kernel.center, sd**2)
    rng = mvn.stream(cfg.seed, index)
    batch = max(1, math.ceil(need * cfg.oversample_factor))
    kept: list[np.ndarray] = []
    have = 0
    for _ in range(cfg.max_retries):
        draws = mvn.sample_gaussian(gaussian, batch, rng)
        ok = draws[((draws >= 0.0) & (draws <= 1.0)).all(axis=1)]
        if ok.shape[0]:
            kept.append(ok)
            have += ok.shape[0]
        if have >= need:
            rows = np.vstack(kept)
            return rows[:need]
    raise RejectionExhausted(index)


def generate(spec: GeneratorSpec, cfg: SamplingConfig) -> Dataset:
    """Sample ``cfg.size`` rows and decode them to the original schema."""
    counts = allocate(spec, cfg)
    blocks: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    for k, need in enumerate(counts):
        if need == 0:
            continue
        rows = _draw_kernel(spec, k, int(need), cfg)
        blocks.append(rows)
        labels.append(np.full(int(need), spec.kernels[k].class_index, dtype=np.int64))
    features = np.vstack(blocks)
    encoded = EncodedDataset(
        features=features,
        labels=np.concatenate(labels),
        class_count=spec.class_count,
    )
    out = decode(encoded, spec.transform)
    return Dataset(out.schema, out.rows, name="generated")


def _cell_matrix(d: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Rows as floats (category indices for nominals) plus a missing mask."""
    a = len(d.schema)
    values = np.zeros((d.n, a))
    missing = np.zeros((d.n, a), dtype=bool)
    for i, row in enumerate(d.rows):
        for j, v in enumerate(row):
            if v is None:
                missing[i, j] = True
            else:
                values[i, j] = float(v)
    return values, missing


def equal_fraction(original: Dataset, generated: Dataset) -> float:
    """Fraction of generated rows exactly matching some original row.

    Numeric cells match within 1e-9; nominal cells must agree; missing only
    matches missing.
    """
    require_same_schema(original, generated)
    ov, om = _cell_matrix(original)
    gv, gm = _cell_matrix(generated)
    hits = 0
    chunk = 256
    for start in range(0, generated.n, chunk):
        gvc = gv[start:start + chunk]
        gmc = gm[start:start + chunk]
        close = np.abs(gvc[:, None, :] - ov[None, :, :]) <= EQUAL_TOL
        both_missing = gmc[:, None, :] & om[None, :, :]
        neither_missing = ~gmc[:, None, :] & ~om[None, :, :]
        cell_ok = (close & neither_missing) | both_missing
        hits += int(cell_ok.all(axis=2).any(axis=1).sum())
    return hits / generated.n
