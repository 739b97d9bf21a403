"""Imputation, nominal encoding, [0,1] normalization, and the exact inverse.

Numeric attributes are affinely mapped to the unit interval with
``(x - min) / span``. The encoder additionally polishes each encoded value
(a couple of Newton steps plus an ulp nudge on the affine map) so that
decoding reproduces the source bit-for-bit whenever a float64 preimage
exists; for values on a binary-aligned grid this is always the case.

Nominal attributes become integer codes ``1..k`` normalized by ``(k-1)``,
or -- for non-binary nominals when one-hot mode is on -- a block of k
indicator columns. Two-category nominals always use the single-column
form, which already lands on {0, 1}.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import AttributeSpec, Dataset
from .errors import AllMissingColumn, SchemaMismatch, WidthMismatch

ENC_NUMERIC = "numeric"
ENC_NOMINAL_INTEGER = "nominal_integer"
ENC_NOMINAL_BINARY = "nominal_binary"


@dataclass(frozen=True)
class AttributeTransform:
    name: str
    kind: str
    encoding: str
    lo: float
    span: float
    categories: tuple[str, ...]
    category_count: int
    columns: tuple[int, int]  # [start, stop) in encoded space
    imputation: float | int

    @property
    def width(self) -> int:
        return self.columns[1] - self.columns[0]


@dataclass(frozen=True)
class TransformRecord:
    attributes: tuple[AttributeTransform, ...]
    class_name: str
    class_categories: tuple[str, ...]
    class_position: int
    width: int

    def rebuild_schema(self) -> tuple[AttributeSpec, ...]:
        """Source schema, with the class column back at its original slot."""
        feats = [
            AttributeSpec(a.name, a.kind, a.categories, "feature")
            for a in self.attributes
        ]
        cls = AttributeSpec(self.class_name, "nominal", self.class_categories, "class")
        feats.insert(self.class_position, cls)
        return tuple(feats)

    def to_dict(self) -> dict:
        return {
            "attributes": [
                {
                    "name": a.name,
                    "kind": a.kind,
                    "encoding": a.encoding,
                    "lo": a.lo,
                    "span": a.span,
                    "categories": list(a.categories),
                    "category_count": a.category_count,
                    "columns": list(a.columns),
                    "imputation": a.imputation,
                }
                for a in self.attributes
            ],
            "class_name": self.class_name,
            "class_categories": list(self.class_categories),
            "class_position": self.class_position,
            "width": self.width,
        }

    @staticmethod
    def from_dict(data: dict) -> "TransformRecord":
        attrs = tuple(
            AttributeTransform(
                name=a["name"],
                kind=a["kind"],
                encoding=a["encoding"],
                lo=float(a["lo"]),
                span=float(a["span"]),
                categories=tuple(a["categories"]),
                category_count=int(a["category_count"]),
                columns=(int(a["columns"][0]), int(a["columns"][1])),
                imputation=a["imputation"],
            )
            for a in data["attributes"]
        )
        return TransformRecord(
            attributes=attrs,
            class_name=data["class_name"],
            class_categories=tuple(data["class_categories"]),
            class_position=int(data["class_position"]),
            width=int(data["width"]),
        )


@dataclass(frozen=True)
class EncodedDataset:
    features: np.ndarray  # (n, m) float64
    labels: np.ndarray  # (n,) int64
    class_count: int

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def width(self) -> int:
        return self.features.shape[1]

    def class_onehot(self) -> np.ndarray:
        out = np.zeros((self.n, self.class_count))
        out[np.arange(self.n), self.labels] = 1.0
        return out


def _median(values: Sequence[float]) -> float:
    return float(np.median(np.asarray(values, dtype=np.float64)))


def _mode(values: Sequence[int]) -> int:
    counts = Counter(values)
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    return int(best[0])


def imputation_value(d: Dataset, index: int):
    """Median (numeric) or modal category (nominal) of the non-missing cells."""
    spec = d.schema[index]
    present = [v for v in d.column(index) if v is not None]
    if not present:
        raise AllMissingColumn(f"attribute {spec.name!r} has no observed values")
    if spec.kind == "numeric":
        return _median(present)
    return _mode(present)


def impute(d: Dataset) -> Dataset:
    """Fill missing cells: column median for numerics, modal category otherwise."""
    fill = {}
    for i, spec in enumerate(d.schema):
        if spec.role == "class":
            continue
        if any(v is None for v in d.column(i)):
            fill[i] = imputation_value(d, i)
    if not fill:
        return d
    rows = (
        tuple(fill[i] if v is None and i in fill else v for i, v in enumerate(row))
        for row in d.rows
    )
    return d.replace_rows(rows)


_SPLIT = 134217729.0  # 2^27 + 1, Dekker's splitting constant


def _two_product(a, b):
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _two_sum(a, b):
    s = a + b
    t = s - a
    err = (a - (s - t)) + (b - t)
    return s, err


def affine_decode(t, span: float, lo: float):
    """``t * span + lo`` with one compensated rounding instead of two.

    The plain expression rounds twice and its image skips representable
    targets, which would make the encode/decode round trip lossy; the
    compensated form recovers every value the unit grid can address.
    """
    p, pe = _two_product(t, span)
    s, se = _two_sum(p, lo)
    return s + (pe + se)


def _unit_scale(values: np.ndarray, lo: float, span: float) -> np.ndarray:
    """Map to [0,1] so that :func:`affine_decode` returns the input exactly
    whenever some float64 preimage achieves that."""
    t = (values - lo) / span
    np.clip(t, 0.0, 1.0, out=t)
    for _ in range(3):
        back = affine_decode(t, span, lo)
        bad = back != values
        if not bad.any():
            return t
        t[bad] += (values[bad] - back[bad]) / span
        np.clip(t, 0.0, 1.0, out=t)
    back = affine_decode(t, span, lo)
    for i in np.flatnonzero(back != values):
        x = values[i]
        for cand in (np.nextafter(t[i], 0.0), np.nextafter(t[i], 1.0)):
            if 0.0 <= cand <= 1.0 and affine_decode(cand, span, lo) == x:
                t[i] = cand
                break
    return t


def _fit_attribute(
    d: Dataset, index: int, start: int, nominal_as_binary: bool
) -> AttributeTransform:
    spec = d.schema[index]
    if spec.kind == "numeric":
        col = np.array(d.column(index), dtype=np.float64)
        lo = float(col.min())
        span = float(col.max()) - lo
        return AttributeTransform(
            name=spec.name,
            kind="numeric",
            encoding=ENC_NUMERIC,
            lo=lo,
            span=span,
            categories=(),
            category_count=0,
            columns=(start, start + 1),
            imputation=imputation_value(d, index),
        )
    k = len(spec.categories)
    if nominal_as_binary and k >= 3:
        return AttributeTransform(
            name=spec.name,
            kind="nominal",
            encoding=ENC_NOMINAL_BINARY,
            lo=0.0,
            span=1.0,
            categories=spec.categories,
            category_count=k,
            columns=(start, start + k),
            imputation=imputation_value(d, index),
        )
    return AttributeTransform(
        name=spec.name,
        kind="nominal",
        encoding=ENC_NOMINAL_INTEGER,
        lo=1.0,
        span=float(k - 1),
        categories=spec.categories,
        category_count=k,
        columns=(start, start + 1),
        imputation=imputation_value(d, index),
    )


def _encode_column(values: list, tf: AttributeTransform) -> np.ndarray:
    n = len(values)
    if tf.encoding == ENC_NUMERIC:
        col = np.asarray(values, dtype=np.float64)
        if tf.span == 0.0:
            return np.full((n, 1), 0.5)
        return _unit_scale(col, tf.lo, tf.span).reshape(n, 1)
    codes = np.asarray(values, dtype=np.int64)
    if tf.encoding == ENC_NOMINAL_BINARY:
        out = np.zeros((n, tf.category_count))
        out[np.arange(n), codes] = 1.0
        return out
    if tf.span == 0.0:  # single-category nominal
        return np.full((n, 1), 0.5)
    return ((codes + 1 - tf.lo) / tf.span).reshape(n, 1)


def encode(
    d: Dataset, nominal_as_binary: bool = True
) -> tuple[EncodedDataset, TransformRecord]:
    """Encode features into an (n, m) unit-interval matrix; class stays a label
    vector with a one-hot width equal to the class arity."""
    transforms: list[AttributeTransform] = []
    start = 0
    for i, spec in enumerate(d.schema):
        if spec.role == "class":
            continue
        if any(v is None for v in d.column(i)):
            raise ValueError(f"attribute {spec.name!r} still has missing values")
        tf = _fit_attribute(d, i, start, nominal_as_binary)
        transforms.append(tf)
        start = tf.columns[1]
    record = TransformRecord(
        attributes=tuple(transforms),
        class_name=d.class_attribute.name,
        class_categories=d.class_attribute.categories,
        class_position=d.class_index,
        width=start,
    )
    blocks = []
    feature_positions = [i for i, a in enumerate(d.schema) if a.role == "feature"]
    for pos, tf in zip(feature_positions, record.attributes):
        blocks.append(_encode_column(d.column(pos), tf))
    features = (
        np.hstack(blocks) if blocks else np.zeros((d.n, 0))
    )
    enc = EncodedDataset(
        features=features,
        labels=d.class_labels(),
        class_count=d.class_count,
    )
    return enc, record


def transform(d: Dataset, record: TransformRecord) -> EncodedDataset:
    """Apply a frozen transform to new data.

    Missing cells are filled from the record's stored imputation values.
    Numeric values outside the fitted range map outside [0,1]; no clamping,
    callers that need the unit interval must enforce it themselves.
    """
    if not _schema_compatible(d, record):
        raise SchemaMismatch("dataset schema differs from the fitted transform")
    feature_positions = [i for i, a in enumerate(d.schema) if a.role == "feature"]
    blocks = []
    for pos, tf in zip(feature_positions, record.attributes):
        values = [tf.imputation if v is None else v for v in d.column(pos)]
        if tf.encoding == ENC_NUMERIC:
            col = np.asarray(values, dtype=np.float64)
            if tf.span == 0.0:
                block = np.full((len(values), 1), 0.5)
            else:
                block = ((col - tf.lo) / tf.span).reshape(-1, 1)
        else:
            block = _encode_column(values, tf)
        blocks.append(block)
    features = np.hstack(blocks) if blocks else np.zeros((d.n, 0))
    return EncodedDataset(features, d.class_labels(), d.class_count)


def _schema_compatible(d: Dataset, record: TransformRecord) -> bool:
    return tuple(d.schema) == record.rebuild_schema()


def _decode_column(block: np.ndarray, tf: AttributeTransform) -> list:
    if tf.encoding == ENC_NUMERIC:
        if tf.span == 0.0:
            return [tf.lo] * block.shape[0]
        return [float(v) for v in affine_decode(block[:, 0], tf.span, tf.lo)]
    if tf.encoding == ENC_NOMINAL_BINARY:
        return [int(c) for c in np.argmax(block, axis=1)]
    if tf.span == 0.0:
        return [0] * block.shape[0]
    codes = np.floor(block[:, 0] * tf.span + tf.lo + 0.5)
    codes = np.clip(codes, 1, tf.category_count)
    return [int(c) - 1 for c in codes]


def decode(encoded: EncodedDataset, record: TransformRecord) -> Dataset:
    """Invert :func:`encode`: exact on its own output, nearest-code/argmax
    rounding for anything else in the unit cube."""
    if encoded.width != record.width:
        raise WidthMismatch(
            f"encoded width {encoded.width} != transform width {record.width}"
        )
    columns: list[list] = []
    for tf in record.attributes:
        block = encoded.features[:, tf.columns[0]: tf.columns[1]]
        columns.append(_decode_column(block, tf))
    labels = [int(v) for v in encoded.labels]
    schema = record.rebuild_schema()
    ci = record.class_position
    rows = []
    for r in range(encoded.n):
        cells = [col[r] for col in columns]
        cells.insert(ci, labels[r])
        rows.append(tuple(cells))
    return Dataset(schema, tuple(rows))


def prepare(
    d: Dataset, nominal_as_binary: bool = True
) -> tuple[EncodedDataset, TransformRecord]:
    """Impute then encode: the standard preprocessing entry point."""
    return encode(impute(d), nominal_as_binary)
