"""Schema-typed tabular datasets: loading, validation, splitting.

Cell values are ``float`` for numeric attributes, ``int`` category indices
for nominal attributes, and ``None`` for missing entries. Datasets are
immutable after construction and safe to share.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ClassTooSmall, MissingClassValue, ParseError, SchemaMismatch

MISSING_TOKENS = ("", "?")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str  # "numeric" | "nominal"
    categories: tuple[str, ...] = ()
    role: str = "feature"  # "feature" | "class"

    def __post_init__(self):
        if self.kind not in ("numeric", "nominal"):
            raise SchemaMismatch(f"{self.name}: unknown kind {self.kind!r}")
        if self.role not in ("feature", "class"):
            raise SchemaMismatch(f"{self.name}: unknown role {self.role!r}")
        if self.kind == "nominal":
            if not self.categories:
                raise SchemaMismatch(f"{self.name}: nominal attribute needs categories")
            if len(set(self.categories)) != len(self.categories):
                raise SchemaMismatch(f"{self.name}: duplicate categories")
        elif self.categories:
            raise SchemaMismatch(f"{self.name}: numeric attribute with categories")
        object.__setattr__(self, "categories", tuple(self.categories))


def validate_schema(schema: Sequence[AttributeSpec]) -> tuple[AttributeSpec, ...]:
    schema = tuple(schema)
    if len({a.name for a in schema}) != len(schema):
        raise SchemaMismatch("duplicate attribute names")
    class_attrs = [a for a in schema if a.role == "class"]
    if len(class_attrs) != 1:
        raise SchemaMismatch("schema must have exactly one class attribute")
    cls = class_attrs[0]
    if cls.kind != "nominal" or len(cls.categories) < 2:
        raise SchemaMismatch("class attribute must be nominal with >= 2 categories")
    return schema


@dataclass(frozen=True)
class Dataset:
    schema: tuple[AttributeSpec, ...]
    rows: tuple[tuple, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "schema", validate_schema(self.schema))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if not self.rows:
            raise SchemaMismatch("dataset must contain at least one row")
        ci = self.class_index
        for i, row in enumerate(self.rows):
            if len(row) != len(self.schema):
                raise SchemaMismatch(f"row {i}: expected {len(self.schema)} cells")
            if row[ci] is None:
                raise MissingClassValue(f"row {i}: missing class value")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def class_index(self) -> int:
        for i, a in enumerate(self.schema):
            if a.role == "class":
                return i
        raise SchemaMismatch("no class attribute")  # unreachable after validation

    @property
    def class_attribute(self) -> AttributeSpec:
        return self.schema[self.class_index]

    @property
    def class_count(self) -> int:
        return len(self.class_attribute.categories)

    @property
    def feature_indices(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.schema) if a.role == "feature")

    def class_labels(self) -> np.ndarray:
        ci = self.class_index
        return np.array([r[ci] for r in self.rows], dtype=np.int64)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.class_labels(), minlength=self.class_count)

    def column(self, index: int) -> list:
        return [r[index] for r in self.rows]

    def replace_rows(self, rows: Iterable[tuple]) -> "Dataset":
        return Dataset(self.schema, tuple(rows), name=self.name)


def schemas_match(a: Sequence[AttributeSpec], b: Sequence[AttributeSpec]) -> bool:
    return tuple(a) == tuple(b)


def require_same_schema(d1: Dataset, d2: Dataset) -> None:
    if not schemas_match(d1.schema, d2.schema):
        raise SchemaMismatch("datasets have different schemas")


def load_schema(path: str | Path) -> tuple[AttributeSpec, ...]:
    """Read a sidecar schema: a JSON list of attribute descriptors."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise SchemaMismatch("schema JSON must be a list of attribute objects")
    specs = []
    for item in raw:
        specs.append(
            AttributeSpec(
                name=item["name"],
                kind=item["kind"],
                categories=tuple(item.get("categories", ())),
                role=item.get("role", "feature"),
            )
        )
    return validate_schema(specs)


def save_schema(schema: Sequence[AttributeSpec], path: str | Path) -> None:
    payload = [
        {
            "name": a.name,
            "kind": a.kind,
            **({"categories": list(a.categories)} if a.kind == "nominal" else {}),
            "role": a.role,
        }
        for a in schema
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _parse_cell(text: str, spec: AttributeSpec, row: int, col: int):
    text = text.strip()
    if text in MISSING_TOKENS:
        return None
    if spec.kind == "numeric":
        try:
            return float(text)
        except ValueError:
            raise ParseError(row, col, f"not a number: {text!r}") from None
    try:
        return spec.categories.index(text)
    except ValueError:
        raise ParseError(
            row, col, f"unseen category {text!r} for attribute {spec.name!r}"
        ) from None


def load_csv(
    path: str | Path,
    schema: Sequence[AttributeSpec] | str | Path,
    name: str = "",
) -> Dataset:
    """Parse a headed CSV against an explicit schema.

    Missing cells are encoded as the empty string or ``?``. Nominal cells
    must name a schema category; anything else is a ``ParseError``.
    """
    if isinstance(schema, (str, Path)):
        schema = load_schema(schema)
    schema = validate_schema(schema)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(0, 0, "empty file") from None
        if [h.strip() for h in header] != [a.name for a in schema]:
            raise SchemaMismatch(
                f"header {header!r} does not match schema names "
                f"{[a.name for a in schema]!r}"
            )
        class_col = next(i for i, a in enumerate(schema) if a.role == "class")
        rows = []
        for r, record in enumerate(reader, start=1):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(schema):
                raise ParseError(r, 0, f"expected {len(schema)} cells, got {len(record)}")
            cells = []
            for c, (text, spec) in enumerate(zip(record, schema)):
                value = _parse_cell(text, spec, r, c)
                if value is None and c == class_col:
                    raise MissingClassValue(f"row {r}: missing class value")
                cells.append(value)
            rows.append(tuple(cells))
    if not rows:
        raise ParseError(0, 0, "no data rows")
    return Dataset(schema, tuple(rows), name=name or Path(path).stem)


def _format_cell(value, spec: AttributeSpec) -> str:
    if value is None:
        return ""
    if spec.kind == "nominal":
        return spec.categories[value]
    return repr(float(value))


def write_csv(d: Dataset, path: str | Path) -> None:
    """Write a dataset so that ``load_csv`` reproduces it exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([a.name for a in d.schema])
        for row in d.rows:
            writer.writerow([_format_cell(v, a) for v, a in zip(row, d.schema)])


def concat(d1: Dataset, d2: Dataset, name: str = "") -> Dataset:
    require_same_schema(d1, d2)
    return Dataset(d1.schema, d1.rows + d2.rows, name=name or d1.name)


def stratified_split(
    d: Dataset, fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Split into two stratified parts, deterministically.

    The first part receives round-half-up(fraction * count) rows of each
    class; the total is then fixed to round-half-up(fraction * n) by +-1
    adjustments applied to classes in decreasing size order.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1)")
    counts = d.class_counts()
    present = np.flatnonzero(counts)
    if (counts[present] < 2).any():
        small = int(present[counts[present] < 2][0])
        raise ClassTooSmall(
            f"class {d.class_attribute.categories[small]!r} has fewer than 2 instances"
        )
    take = {int(c): math.floor(fraction * counts[c] + 0.5) for c in present}
    target_total = math.floor(fraction * d.n + 0.5)
    if target_total in (0, d.n):
        raise ValueError(f"fraction {fraction} leaves one part empty for n={d.n}")
    order = sorted(present, key=lambda c: (-counts[c], c))
    diff = target_total - sum(take.values())
    step = 1 if diff > 0 else -1
    i = 0
    while diff != 0:
        c = int(order[i % len(order)])
        nxt = take[c] + step
        if 0 <= nxt <= counts[c]:
            take[c] = nxt
            diff -= step
        i += 1

    rng = np.random.default_rng(seed)
    labels = d.class_labels()
    first_idx: list[int] = []
    second_idx: list[int] = []
    for c in present:
        members = np.flatnonzero(labels == c)
        perm = rng.permutation(len(members))
        chosen = members[perm[: take[int(c)]]]
        rest = members[perm[take[int(c)]:]]
        first_idx.extend(int(j) for j in chosen)
        second_idx.extend(int(j) for j in rest)
    first_idx.sort()
    second_idx.sort()
    part1 = Dataset(d.schema, tuple(d.rows[j] for j in first_idx), name=d.name)
    part2 = Dataset(d.schema, tuple(d.rows[j] for j in second_idx), name=d.name)
    return part1, part2
