"""Distributional comparison of two datasets sharing a schema.

Numeric attributes are normalized to [0,1] over the pooled range of both
datasets, then compared by moment differences and a two-sample KS test;
discrete attributes by the Hellinger distance between category frequency
distributions. The class column is excluded throughout. Summary fields are
the per-attribute averages; attributes whose moments are undefined
(fewer than two values, or zero variance) are reported as absent and left
out of the averages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dataset import Dataset, require_same_schema
from .errors import DegenerateSample, EmptySample, NotADistribution


@dataclass(frozen=True)
class Moments:
    mean: float
    std: float  # n-1 divisor
    skewness: float  # m3 / m2^(3/2)
    kurtosis: float  # m4 / m2^2 - 3 (excess)


def moments(values: Sequence[float]) -> Moments:
    """Sample moments; raises for samples where shape moments are undefined."""
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise DegenerateSample("need at least two values")
    if x.min() == x.max():
        raise DegenerateSample("zero variance; skewness and kurtosis undefined")
    mean = float(x.mean())
    centered = x - mean
    m2 = float((centered**2).mean())
    if m2 == 0.0:
        raise DegenerateSample("zero variance; skewness and kurtosis undefined")
    m3 = float((centered**3).mean())
    m4 = float((centered**4).mean())
    return Moments(
        mean=mean,
        std=float(x.std(ddof=1)),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / m2**2 - 3.0,
    )


def hellinger(p: Mapping, q: Mapping) -> float:
    """(1/sqrt(2)) L2 distance between square-rooted discrete distributions.

    Keys are taken as the union of both supports; a missing key means
    probability zero. Bounded by [0, 1]; zero iff the distributions match,
    one iff the supports are disjoint.
    """
    for name, dist in (("p", p), ("q", q)):
        total = math.fsum(dist.values())
        if any(v < 0 for v in dist.values()) or abs(total - 1.0) > 1e-9:
            raise NotADistribution(f"{name} must be nonnegative and sum to 1")
    keys = set(p) | set(q)
    acc = 0.0
    for key in keys:
        diff = math.sqrt(p.get(key, 0.0)) - math.sqrt(q.get(key, 0.0))
        acc += diff * diff
    return math.sqrt(acc) / math.sqrt(2.0)


def _kolmogorov_tail(lam: float) -> float:
    """Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2)."""
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 1000000):
        term = math.exp(-2.0 * (k * lam) ** 2)
        if term < 1e-12:
            break
        total += sign * term
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


def ks_test(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Two-sample KS statistic and asymptotic p-value.

    D is the largest ECDF gap over the pooled values; the p-value uses the
    Kolmogorov tail at lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D with
    ne = n1*n2/(n1+n2).
    """
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    n1, n2 = x.shape[0], y.shape[0]
    if n1 == 0 or n2 == 0:
        raise EmptySample("both samples must be nonempty")
    pooled = np.unique(np.concatenate([x, y]))
    f1 = np.searchsorted(x, pooled, side="right") / n1
    f2 = np.searchsorted(y, pooled, side="right") / n2
    d = float(np.abs(f1 - f2).max())
    if d == 0.0:
        return 0.0, 1.0
    ne = n1 * n2 / (n1 + n2)
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    return d, _kolmogorov_tail(lam)


@dataclass(frozen=True)
class AttributeComparison:
    name: str
    kind: str
    delta_mean: float | None = None
    delta_std: float | None = None
    delta_skew: float | None = None
    delta_kurt: float | None = None
    ks_d: float | None = None
    ks_p: float | None = None
    hellinger: float | None = None
    degenerate: bool = False


@dataclass(frozen=True)
class StatsSummary:
    delta_mean: float | None
    delta_std: float | None
    delta_skew: float | None
    delta_kurt: float | None
    ks_reject_pct: float | None
    mean_hellinger: float | None
    attributes: tuple[AttributeComparison, ...]

    def to_dict(self) -> dict:
        return {
            "delta_mean": self.delta_mean,
            "delta_std": self.delta_std,
            "delta_skew": self.delta_skew,
            "delta_kurt": self.delta_kurt,
            "ks_reject_pct": self.ks_reject_pct,
            "mean_hellinger": self.mean_hellinger,
            "attributes": [vars(a) for a in self.attributes],
        }


def _observed(d: Dataset, index: int) -> list:
    return [v for v in d.column(index) if v is not None]


def _empirical(values: Sequence[int], categories: Sequence[str]) -> dict:
    counts = np.bincount(np.asarray(values, dtype=np.int64), minlength=len(categories))
    total = counts.sum()
    return {
        categories[i]: counts[i] / total for i in range(len(categories)) if counts[i]
    }


def compare(d1: Dataset, d2: Dataset) -> StatsSummary:
    """Per-attribute comparison averaged into one summary record."""
    require_same_schema(d1, d2)
    details: list[AttributeComparison] = []
    dmeans, dstds, dskews, dkurts = [], [], [], []
    ks_rejected = 0
    ks_tested = 0
    hellingers = []
    for i, spec in enumerate(d1.schema):
        if spec.role == "class":
            continue
        if spec.kind == "numeric":
            x1 = np.asarray(_observed(d1, i), dtype=np.float64)
            x2 = np.asarray(_observed(d2, i), dtype=np.float64)
            if x1.size == 0 or x2.size == 0:
                details.append(AttributeComparison(spec.name, "numeric", degenerate=True))
                continue
            d_stat, p = ks_test(x1, x2)
            ks_tested += 1
            if p < 0.05:
                ks_rejected += 1
            lo = min(x1.min(), x2.min())
            span = max(x1.max(), x2.max()) - lo
            if span == 0.0:
                details.append(
                    AttributeComparison(
                        spec.name, "numeric", ks_d=d_stat, ks_p=p, degenerate=True
                    )
                )
                continue
            try:
                m1 = moments((x1 - lo) / span)
                m2 = moments((x2 - lo) / span)
            except DegenerateSample:
                details.append(
                    AttributeComparison(
                        spec.name, "numeric", ks_d=d_stat, ks_p=p, degenerate=True
                    )
                )
                continue
            comp = AttributeComparison(
                spec.name,
                "numeric",
                delta_mean=m1.mean - m2.mean,
                delta_std=m1.std - m2.std,
                delta_skew=m1.skewness - m2.skewness,
                delta_kurt=m1.kurtosis - m2.kurtosis,
                ks_d=d_stat,
                ks_p=p,
            )
            details.append(comp)
            dmeans.append(comp.delta_mean)
            dstds.append(comp.delta_std)
            dskews.append(comp.delta_skew)
            dkurts.append(comp.delta_kurt)
        else:
            v1 = _observed(d1, i)
            v2 = _observed(d2, i)
            if not v1 or not v2:
                details.append(AttributeComparison(spec.name, "nominal", degenerate=True))
                continue
            h = hellinger(
                _empirical(v1, spec.categories), _empirical(v2, spec.categories)
            )
            details.append(AttributeComparison(spec.name, "nominal", hellinger=h))
            hellingers.append(h)

    def _avg(values: list) -> float | None:
        return float(np.mean(values)) if values else None

    return StatsSummary(
        delta_mean=_avg(dmeans),
        delta_std=_avg(dstds),
        delta_skew=_avg(dskews),
        delta_kurt=_avg(dkurts),
        ks_reject_pct=(100.0 * ks_rejected / ks_tested) if ks_tested else None,
        mean_hellinger=_avg(hellingers),
        attributes=tuple(details),
    )
