from __future__ import annotations

import numpy as np
import pytest

import kernelsmith as ks
from kernelsmith.dataset import AttributeSpec, Dataset


@pytest.fixture(scope="session")
def iris() -> Dataset:
    return ks.fixtures.iris()


@pytest.fixture(scope="session")
def grid() -> Dataset:
    return ks.fixtures.grid(seed=1)


def binary_grid_column(rng: np.random.Generator, n: int) -> list[float]:
    """Numeric column whose values sit on a binary-aligned grid spanning the
    column range, keeping the unit-interval transform exactly invertible."""
    q = 2.0 ** int(rng.integers(-6, 7))
    j = int(rng.integers(1, 16))
    lo = int(rng.integers(-10**6, 10**6))
    idx = rng.integers(0, 2**j + 1, n)
    idx[0] = 0
    if n > 1:
        idx[1] = 2**j
    return [float((lo + i) * q) for i in idx]


def random_mixed_dataset(
    rng: np.random.Generator,
    n_range: tuple[int, int] = (3, 40),
    with_missing: bool = False,
) -> Dataset:
    """Randomized mixed-type dataset with a class column in a random slot."""
    n = int(rng.integers(*n_range))
    n_numeric = int(rng.integers(0, 4))
    n_nominal = int(rng.integers(0, 4))
    if n_numeric + n_nominal == 0:
        n_numeric = 1
    columns: list[tuple[AttributeSpec, list]] = []
    for i in range(n_numeric):
        col = binary_grid_column(rng, n)
        if rng.random() < 0.2:  # occasional constant column
            col = [col[0]] * n
        columns.append((AttributeSpec(f"num{i}", "numeric"), col))
    for i in range(n_nominal):
        k = int(rng.integers(1, 6))
        cats = tuple(f"v{j}" for j in range(k))
        col = [int(c) for c in rng.integers(0, k, n)]
        columns.append((AttributeSpec(f"nom{i}", "nominal", cats), col))
    n_classes = int(rng.integers(2, 5))
    class_cats = tuple(f"c{j}" for j in range(n_classes))
    class_col = [int(c) for c in rng.integers(0, n_classes, n)]
    class_pos = int(rng.integers(0, len(columns) + 1))
    columns.insert(
        class_pos,
        (AttributeSpec("target", "nominal", class_cats, "class"), class_col),
    )
    if with_missing:
        for ci, (spec, col) in enumerate(columns):
            if spec.role == "class":
                continue
            mask = rng.random(n) < 0.15
            if mask.all():
                mask[0] = False  # keep one observed value per column
            columns[ci] = (spec, [None if m else v for v, m in zip(col, mask)])
    schema = tuple(spec for spec, _ in columns)
    rows = tuple(
        tuple(col[r] for _, col in columns) for r in range(n)
    )
    return Dataset(schema, rows)


def small_dataset(rows, schema=None, categories=("x", "y")) -> Dataset:
    """Two-column helper: one numeric feature plus a class column."""
    if schema is None:
        schema = (
            AttributeSpec("value", "numeric"),
            AttributeSpec("label", "nominal", categories, "class"),
        )
    return Dataset(schema, tuple(rows))


@pytest.fixture(scope="session")
def alternating_line() -> Dataset:
    """Every training point far from same-class neighbors: one unit per
    instance, all spreads zero."""
    rows = tuple((float(i), i % 2) for i in range(20))
    return small_dataset(rows)
