"""Turn a trained RBF model into a generative kernel list.

Pipeline: impute -> encode -> train -> assign every training row to its
maximally activating unit -> per-unit, per-dimension sample spread of the
matched rows -> drop units whose weight falls under ``min_w`` -> package
the surviving kernels with the attribute transform and class metadata.

The packaged document serializes to versioned JSON
(``kernelsmith-generator/v1``) and round-trips bit-exactly.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dda
from .dataset import Dataset
from .errors import AllKernelsPruned, DimMismatch, NoMatchingInstances
from .preprocess import EncodedDataset, TransformRecord, prepare

FORMAT_TAG = "kernelsmith-generator/v1"


@dataclass(frozen=True)
class Kernel:
    center: np.ndarray
    weight: int
    class_index: int
    spread: np.ndarray  # per-dimension sample std of matched rows


@dataclass(frozen=True)
class GeneratorMeta:
    n: int
    width: int
    theta_plus: float
    theta_minus: float
    min_w: int
    nominal_as_binary: bool
    seed: int
    build_seconds: float


@dataclass(frozen=True)
class GeneratorSpec:
    kernels: tuple[Kernel, ...]
    transform: TransformRecord
    class_categories: tuple[str, ...]
    class_distribution: np.ndarray  # empirical training proportions
    meta: GeneratorMeta

    @property
    def kernel_count(self) -> int:
        return len(self.kernels)

    @property
    def class_count(self) -> int:
        return len(self.class_categories)

    def kernels_of_class(self, c: int) -> list[int]:
        return [i for i, k in enumerate(self.kernels) if k.class_index == c]


def assign_units(model: dda.RbfModel, encoded: EncodedDataset) -> np.ndarray:
    """Index of the maximally activating unit per row (ties -> lowest index)."""
    if encoded.width != model.width:
        raise DimMismatch(
            f"encoded width {encoded.width} != model width {model.width}"
        )
    return np.argmax(dda.activation_matrix(model, encoded.features), axis=1)


def estimate_spread(
    assignments: np.ndarray, encoded: EncodedDataset, unit: int
) -> np.ndarray:
    """Per-dimension sample std (n-1 divisor) of the rows matched to a unit.

    A single matched row gives the zero vector; sampling substitutes the
    default spread for zeros later.
    """
    rows = encoded.features[assignments == unit]
    if rows.shape[0] == 0:
        raise NoMatchingInstances(f"unit {unit} matched no instances")
    if rows.shape[0] == 1:
        return np.zeros(encoded.width)
    return rows.std(axis=0, ddof=1)


def build(
    d: Dataset,
    min_w: int = 1,
    nominal_as_binary: bool = True,
    theta_plus: float = dda.DEFAULT_THETA_PLUS,
    theta_minus: float = dda.DEFAULT_THETA_MINUS,
    seed: int = 0,
    max_epochs: int = 10,
) -> GeneratorSpec:
    """Fit the full generator from a dataset."""
    if min_w < 1:
        raise ValueError("min_w must be >= 1")
    t0 = time.perf_counter()
    encoded, record = prepare(d, nominal_as_binary)
    model = dda.train(encoded, theta_plus, theta_minus, max_epochs)
    assignments = assign_units(model, encoded)
    kernels = []
    for j in range(model.unit_count):
        if model.weights[j] < min_w:
            continue
        if (assignments == j).any():
            spread = estimate_spread(assignments, encoded, j)
        else:
            spread = np.zeros(encoded.width)
        kernels.append(
            Kernel(
                center=model.centers[j].copy(),
                weight=int(model.weights[j]),
                class_index=int(model.classes[j]),
                spread=spread,
            )
        )
    if not kernels:
        raise AllKernelsPruned(
            f"min_w={min_w} removed all {model.unit_count} units"
        )
    counts = d.class_counts().astype(np.float64)
    elapsed = time.perf_counter() - t0
    meta = GeneratorMeta(
        n=d.n,
        width=encoded.width,
        theta_plus=theta_plus,
        theta_minus=theta_minus,
        min_w=min_w,
        nominal_as_binary=nominal_as_binary,
        seed=seed,
        build_seconds=elapsed,
    )
    return GeneratorSpec(
        kernels=tuple(kernels),
        transform=record,
        class_categories=d.class_attribute.categories,
        class_distribution=counts / counts.sum(),
        meta=meta,
    )


def to_json(spec: GeneratorSpec) -> str:
    payload = {
        "format": FORMAT_TAG,
        "kernels": [
            {
                "center": [float(v) for v in k.center],
                "weight": k.weight,
                "class": k.class_index,
                "spread": [float(v) for v in k.spread],
            }
            for k in spec.kernels
        ],
        "transform": spec.transform.to_dict(),
        "class_categories": list(spec.class_categories),
        "class_distribution": [float(v) for v in spec.class_distribution],
        "meta": {
            "n": spec.meta.n,
            "width": spec.meta.width,
            "theta_plus": spec.meta.theta_plus,
            "theta_minus": spec.meta.theta_minus,
            "min_w": spec.meta.min_w,
            "nominal_as_binary": spec.meta.nominal_as_binary,
            "seed": spec.meta.seed,
            "build_seconds": spec.meta.build_seconds,
        },
    }
    return json.dumps(payload, indent=2)


def from_json(text: str) -> GeneratorSpec:
    payload = json.loads(text)
    if payload.get("format") != FORMAT_TAG:
        raise ValueError(
            f"unsupported generator format {payload.get('format')!r}"
        )
    kernels = tuple(
        Kernel(
            center=np.array(k["center"], dtype=np.float64),
            weight=int(k["weight"]),
            class_index=int(k["class"]),
            spread=np.array(k["spread"], dtype=np.float64),
        )
        for k in payload["kernels"]
    )
    meta = GeneratorMeta(
        n=int(payload["meta"]["n"]),
        width=int(payload["meta"]["width"]),
        theta_plus=float(payload["meta"]["theta_plus"]),
        theta_minus=float(payload["meta"]["theta_minus"]),
        min_w=int(payload["meta"]["min_w"]),
        nominal_as_binary=bool(payload["meta"]["nominal_as_binary"]),
        seed=int(payload["meta"]["seed"]),
        build_seconds=float(payload["meta"]["build_seconds"]),
    )
    return GeneratorSpec(
        kernels=kernels,
        transform=TransformRecord.from_dict(payload["transform"]),
        class_categories=tuple(payload["class_categories"]),
        class_distribution=np.array(
            payload["class_distribution"], dtype=np.float64
        ),
        meta=meta,
    )


def save(spec: GeneratorSpec, path: str | Path) -> None:
    Path(path).write_text(to_json(spec), encoding="utf-8")


def load(path: str | Path) -> GeneratorSpec:
    return from_json(Path(path).read_text(encoding="utf-8"))
