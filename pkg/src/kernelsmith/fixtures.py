"""Bundled demonstration datasets.

``iris()`` loads the packaged 150-row flower measurements; ``grid()``
rebuilds the three-blob benchmark: 500 points per Gaussian at (-5,-5),
(0,0), (5,5) with unit spread, one class per blob.
"""
from __future__ import annotations

from importlib import resources

import numpy as np

from .dataset import AttributeSpec, Dataset, load_csv, load_schema

GRID_CENTERS = ((-5.0, -5.0), (0.0, 0.0), (5.0, 5.0))
GRID_CLASSES = ("red", "blue", "green")


def _data_path(name: str):
    return resources.files("kernelsmith.data").joinpath(name)


def iris() -> Dataset:
    with resources.as_file(_data_path("iris.csv")) as csv_path, resources.as_file(
        _data_path("iris.schema.json")
    ) as schema_path:
        return load_csv(csv_path, load_schema(schema_path), name="iris")


def iris_schema() -> tuple[AttributeSpec, ...]:
    with resources.as_file(_data_path("iris.schema.json")) as schema_path:
        return load_schema(schema_path)


def grid(seed: int = 1, points_per_center: int = 500) -> Dataset:
    """Three well-separated 2-D Gaussian blobs, one class each."""
    rng = np.random.default_rng(seed)
    schema = (
        AttributeSpec("a1", "numeric"),
        AttributeSpec("a2", "numeric"),
        AttributeSpec("group", "nominal", GRID_CLASSES, "class"),
    )
    rows = []
    for c, center in enumerate(GRID_CENTERS):
        points = rng.normal(loc=center, scale=1.0, size=(points_per_center, 2))
        rows.extend((float(p[0]), float(p[1]), c) for p in points)
    return Dataset(schema, tuple(rows), name="grid")
