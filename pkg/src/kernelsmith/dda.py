"""RBF network training by dynamic decay adjustment.

Units are Gaussian prototypes ``exp(-||x - t||^2 / sigma2)`` committed to a
single class. Training sweeps the data in dataset order: an instance either
reinforces the strongest same-class unit activating above ``theta_plus`` or
becomes a new unit; every sweep also shrinks conflicting-class units until
no training instance activates them above ``theta_minus``. Sweeps repeat
until a pass neither adds a unit nor shrinks a width (or ``max_epochs``).

The algorithm is order-sensitive by nature; iteration order is fixed to the
dataset order so results are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimMismatch
from .preprocess import EncodedDataset

DEFAULT_THETA_PLUS = 0.4
DEFAULT_THETA_MINUS = 0.2
DEFAULT_SIGMA2 = 1.0  # width of a unit created before any conflict exists
SIGMA2_FLOOR = 1e-12  # keeps the activation finite for duplicate conflicts


@dataclass(frozen=True)
class RbfUnit:
    center: np.ndarray
    sigma2: float
    weight: int
    class_index: int


@dataclass(frozen=True)
class RbfModel:
    centers: np.ndarray  # (G, m)
    sigma2: np.ndarray  # (G,)
    weights: np.ndarray  # (G,) final-epoch commit counts
    classes: np.ndarray  # (G,)
    theta_plus: float
    theta_minus: float
    class_count: int

    @property
    def unit_count(self) -> int:
        return self.centers.shape[0]

    @property
    def width(self) -> int:
        return self.centers.shape[1]

    def units(self) -> tuple[RbfUnit, ...]:
        return tuple(
            RbfUnit(self.centers[j].copy(), float(self.sigma2[j]),
                    int(self.weights[j]), int(self.classes[j]))
            for j in range(self.unit_count)
        )


def activation(unit: RbfUnit, x: np.ndarray) -> float:
    """Gaussian response in (0, 1]; exactly 1 iff x is the center."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != unit.center.shape:
        raise DimMismatch(f"expected dim {unit.center.shape[0]}, got {x.shape}")
    d2 = float(np.dot(x - unit.center, x - unit.center))
    return math.exp(-d2 / unit.sigma2)


def activation_matrix(model: RbfModel, X: np.ndarray) -> np.ndarray:
    """(n, G) activations of every unit on every row."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.width:
        raise DimMismatch(f"expected dim {model.width}, got {X.shape[1]}")
    d2 = (
        (X**2).sum(axis=1)[:, None]
        - 2.0 * X @ model.centers.T
        + (model.centers**2).sum(axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-d2 / model.sigma2)


def train(
    encoded: EncodedDataset,
    theta_plus: float = DEFAULT_THETA_PLUS,
    theta_minus: float = DEFAULT_THETA_MINUS,
    max_epochs: int = 10,
) -> RbfModel:
    """Grow and shrink units until a full pass changes nothing."""
    if not 0.0 < theta_minus < theta_plus < 1.0:
        raise ValueError("need 0 < theta_minus < theta_plus < 1")
    X = np.ascontiguousarray(encoded.features, dtype=np.float64)
    y = np.ascontiguousarray(encoded.labels, dtype=np.int64)
    n, m = X.shape
    centers = np.zeros((n, m))
    sigma2 = np.zeros(n)
    classes = np.zeros(n, dtype=np.int64)
    weights = np.zeros(n, dtype=np.int64)
    n_units = 0
    shrink_scale = 1.0 / math.log(1.0 / theta_minus)
    for _ in range(max_epochs):
        weights[:n_units] = 0
        n_units, changed = _kernels.dda_epoch(
            X, y, centers, sigma2, classes, weights, n_units,
            theta_plus, shrink_scale, DEFAULT_SIGMA2, SIGMA2_FLOOR,
        )
        if not changed:
            break
    return RbfModel(
        centers=centers[:n_units].copy(),
        sigma2=sigma2[:n_units].copy(),
        weights=weights[:n_units].copy(),
        classes=classes[:n_units].copy(),
        theta_plus=theta_plus,
        theta_minus=theta_minus,
        class_count=encoded.class_count,
    )


def class_scores(model: RbfModel, X: np.ndarray) -> np.ndarray:
    """(n, C) sums of weight-normalized activations per class."""
    if model.unit_count == 0:
        raise ValueError("model has no units; train it first")
    act = activation_matrix(model, X)
    total = model.weights.sum()
    coef = model.weights / total if total > 0 else np.ones_like(model.weights)
    scores = np.zeros((act.shape[0], model.class_count))
    for c in range(model.class_count):
        cols = model.classes == c
        if cols.any():
            scores[:, c] = (act[:, cols] * coef[cols]).sum(axis=1)
    return scores


def classify(model: RbfModel, x: np.ndarray) -> int:
    """Winner-takes-all class; ties resolve to the lowest class index."""
    return int(np.argmax(class_scores(model, np.atleast_2d(x))[0]))


def classify_batch(model: RbfModel, X: np.ndarray) -> np.ndarray:
    return np.argmax(class_scores(model, X), axis=1)


def coverage_violations(model: RbfModel, encoded: EncodedDataset) -> int:
    """Training rows whose best same-class activation falls below theta_plus."""
    act = activation_matrix(model, encoded.features)
    bad = 0
    for i in range(encoded.n):
        same = model.classes == encoded.labels[i]
        if not same.any() or act[i, same].max() < model.theta_plus:
            bad += 1
    return bad


def shrink_violations(
    model: RbfModel, encoded: EncodedDataset, tol: float = 1e-9
) -> int:
    """Training rows activating some conflicting-class unit above theta_minus."""
    act = activation_matrix(model, encoded.features)
    bad = 0
    for i in range(encoded.n):
        other = model.classes != encoded.labels[i]
        if other.any() and act[i, other].max() > model.theta_minus + tol:
            bad += 1
    return bad
