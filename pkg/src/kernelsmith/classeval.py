"""Predictive similarity via cross-trained random forests.

Both datasets are halved (stratified), a forest is trained on every half,
and each model is scored on the unseen half of its own dataset and on the
whole other dataset. Averaging the four scores per the two-fold scheme and
over repeats yields m1d1/m1d2/m2d1/m2d2; the headline transfer gap is
delta_d1 = m1d1 - m2d1.

The built-in classifier is a bagged CART forest: bootstrap per tree,
Gini-impurity splits among floor(sqrt(m)) randomly drawn encoded features,
midpoint thresholds, grown pure. Any classifier exposing train/predict over
datasets can stand in for it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .dataset import Dataset, require_same_schema, stratified_split
from .errors import SingleClass
from .preprocess import TransformRecord, prepare, transform


@dataclass(frozen=True)
class ForestConfig:
    tree_count: int = 100
    features_per_node: int | None = None  # default: floor(sqrt(encoded width))
    seed: int = 0
    min_leaf: int = 1
    max_depth: int | None = None
    bootstrap: bool = True

    def __post_init__(self):
        if self.tree_count < 1:
            raise ValueError("tree_count must be >= 1")


class _Tree:
    __slots__ = ("feature", "threshold", "left", "right", "leaf")

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.leaf: list[int] = []

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.leaf.append(-1)
        return len(self.feature) - 1

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                if X[i, self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[i] = self.leaf[node]
        return out


@dataclass(frozen=True)
class RandomForestModel:
    record: TransformRecord
    trees: tuple[_Tree, ...]
    class_count: int
    config: ForestConfig


def _majority(counts: np.ndarray) -> int:
    return int(np.argmax(counts))  # ties -> lowest class index


def _grow(tree, X, y, rows, rng, cfg, n_classes, fpn, depth=0) -> int:
    node = tree.add_node()
    counts = np.bincount(y[rows], minlength=n_classes)
    pure = int((counts > 0).sum()) == 1
    depth_capped = cfg.max_depth is not None and depth >= cfg.max_depth
    if pure or rows.shape[0] <= cfg.min_leaf or depth_capped:
        tree.leaf[node] = _majority(counts)
        return node
    feats = np.sort(rng.permutation(X.shape[1])[:fpn]).astype(np.int64)
    feat, thr, child = _kernels.best_split(X, y, rows, feats, n_classes)
    n = rows.shape[0]
    parent = 1.0 - float(((counts / n) ** 2).sum())
    if feat < 0 or child >= parent - 1e-12:
        tree.leaf[node] = _majority(counts)
        return node
    go_left = X[rows, feat] <= thr
    left_rows = rows[go_left]
    right_rows = rows[~go_left]
    if left_rows.shape[0] == 0 or right_rows.shape[0] == 0:
        tree.leaf[node] = _majority(counts)  # adjacent-float midpoint corner
        return node
    tree.feature[node] = int(feat)
    tree.threshold[node] = float(thr)
    tree.left[node] = _grow(tree, X, y, left_rows, rng, cfg, n_classes, fpn, depth + 1)
    tree.right[node] = _grow(tree, X, y, right_rows, rng, cfg, n_classes, fpn, depth + 1)
    return node


def rf_train(d: Dataset, cfg: ForestConfig = ForestConfig()) -> RandomForestModel:
    """Fit a bagged Gini forest on the encoded representation of ``d``."""
    present = (d.class_counts() > 0).sum()
    if present < 2:
        raise SingleClass("training data must contain at least two classes")
    encoded, record = prepare(d)
    X = np.ascontiguousarray(encoded.features)
    y = np.ascontiguousarray(encoded.labels)
    m = X.shape[1]
    fpn = cfg.features_per_node or max(1, math.floor(math.sqrt(m)))
    fpn = min(fpn, m)
    trees = []
    for t in range(cfg.tree_count):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.seed, t]))
        )
        if cfg.bootstrap:
            rows = np.sort(rng.integers(0, X.shape[0], X.shape[0])).astype(np.int64)
        else:
            rows = np.arange(X.shape[0], dtype=np.int64)
        tree = _Tree()
        _grow(tree, X, y, rows, rng, cfg, encoded.class_count, fpn)
        trees.append(tree)
    return RandomForestModel(
        record=record,
        trees=tuple(trees),
        class_count=encoded.class_count,
        config=cfg,
    )


def rf_predict(model: RandomForestModel, d: Dataset) -> tuple[np.ndarray, float]:
    """Majority-vote labels plus accuracy against the dataset's classes."""
    encoded = transform(d, model.record)  # raises SchemaMismatch on drift
    X = np.ascontiguousarray(encoded.features)
    votes = np.zeros((X.shape[0], model.class_count), dtype=np.int64)
    for tree in model.trees:
        pred = tree.predict(X)
        votes[np.arange(X.shape[0]), pred] += 1
    labels = np.argmax(votes, axis=1)
    accuracy = float((labels == encoded.labels).mean())
    return labels, accuracy


@dataclass(frozen=True)
class RepeatScores:
    m1d1: float
    m1d2: float
    m2d1: float
    m2d2: float


@dataclass(frozen=True)
class ClassEvalResult:
    m1d1: float
    m1d2: float
    m2d1: float
    m2d2: float
    delta_d1: float
    repeats: int
    details: tuple[RepeatScores, ...]

    def to_dict(self) -> dict:
        return {
            "m1d1": self.m1d1,
            "m1d2": self.m1d2,
            "m2d1": self.m2d1,
            "m2d2": self.m2d2,
            "delta_d1": self.delta_d1,
            "repeats": self.repeats,
            "details": [vars(r) for r in self.details],
        }


def _acc(model: RandomForestModel, d: Dataset) -> float:
    return rf_predict(model, d)[1]


def cross_performance(
    d1: Dataset,
    d2: Dataset,
    repeats: int = 5,
    cfg: ForestConfig | None = None,
    seed: int = 0,
) -> ClassEvalResult:
    """Repeated two-fold cross-training between two datasets."""
    require_same_schema(d1, d2)
    cfg = cfg or ForestConfig()
    details = []
    for r in range(repeats):
        ints = np.random.SeedSequence([seed, r]).generate_state(6)
        d1a, d1b = stratified_split(d1, 0.5, int(ints[0]))
        d2a, d2b = stratified_split(d2, 0.5, int(ints[1]))
        m1a = rf_train(d1a, replace(cfg, seed=int(ints[2])))
        m1b = rf_train(d1b, replace(cfg, seed=int(ints[3])))
        m2a = rf_train(d2a, replace(cfg, seed=int(ints[4])))
        m2b = rf_train(d2b, replace(cfg, seed=int(ints[5])))
        details.append(
            RepeatScores(
                m1d1=(_acc(m1a, d1b) + _acc(m1b, d1a)) / 2.0,
                m1d2=(_acc(m1a, d2) + _acc(m1b, d2)) / 2.0,
                m2d1=(_acc(m2a, d1) + _acc(m2b, d1)) / 2.0,
                m2d2=(_acc(m2a, d2b) + _acc(m2b, d2a)) / 2.0,
            )
        )
    m1d1 = float(np.mean([s.m1d1 for s in details]))
    m1d2 = float(np.mean([s.m1d2 for s in details]))
    m2d1 = float(np.mean([s.m2d1 for s in details]))
    m2d2 = float(np.mean([s.m2d2 for s in details]))
    return ClassEvalResult(
        m1d1=m1d1,
        m1d2=m1d2,
        m2d1=m2d1,
        m2d2=m2d2,
        delta_d1=m1d1 - m2d1,
        repeats=repeats,
        details=tuple(details),
    )
