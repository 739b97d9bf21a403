from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from kernelsmith.clustering import (
    ari,
    choose_k,
    cross_compare,
    gower,
    pam,
    silhouette_width,
)
from kernelsmith.dataset import AttributeSpec, Dataset
from kernelsmith.errors import BadK, LengthMismatch, SchemaMismatch, TooFewInstances


MIXED = (
    AttributeSpec("length", "numeric"),
    AttributeSpec("color", "nominal", ("red", "blue")),
    AttributeSpec("c", "nominal", ("a", "b"), "class"),
)


def points_1d(values) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    return np.abs(x[:, None] - x[None, :])


def brute_force_pam_cost(dist: np.ndarray, k: int) -> float:
    n = dist.shape[0]
    best = np.inf
    for medoids in itertools.combinations(range(n), k):
        cost = dist[:, medoids].min(axis=1).sum()
        best = min(best, cost)
    return best


def brute_force_ari(u, v) -> float:
    """Independent oracle: count agreeing/disagreeing pairs directly."""
    n = len(u)
    n11 = n00 = n01 = n10 = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_u = u[i] == u[j]
            same_v = v[i] == v[j]
            if same_u and same_v:
                n11 += 1
            elif not same_u and not same_v:
                n00 += 1
            elif same_u:
                n01 += 1
            else:
                n10 += 1
    denom = (n11 + n01) * (n01 + n00) + (n11 + n10) * (n10 + n00)
    if denom == 0:
        return 1.0
    return 2.0 * (n11 * n00 - n01 * n10) / denom


def brute_force_silhouette(dist, assignment, k) -> float:
    n = dist.shape[0]
    total = 0.0
    for i in range(n):
        own = [j for j in range(n) if assignment[j] == assignment[i] and j != i]
        if not own:
            continue
        a = sum(dist[i, j] for j in own) / len(own)
        b = math.inf
        for c in range(k):
            members = [j for j in range(n) if assignment[j] == c]
            if not members or c == assignment[i]:
                continue
            b = min(b, sum(dist[i, j] for j in members) / len(members))
        if max(a, b) > 0 and b < math.inf:
            total += (b - a) / max(a, b)
    return total / n


def test_gower_identical_rows_zero():
    d = Dataset(MIXED, ((1.0, 0, 0), (1.0, 0, 1)))
    g = gower(d)
    assert g[0, 1] == 0.0


def test_gower_maximally_different_rows_sum_to_attribute_count():
    d = Dataset(MIXED, ((0.0, 0, 0), (10.0, 1, 1)))
    g = gower(d)
    assert g[0, 1] == 2.0  # two feature attributes, both at maximum


def test_gower_hand_case():
    d = Dataset(MIXED, ((0.0, 0, 0), (2.0, 0, 1), (7.0, 0, 0), (10.0, 0, 1)))
    g = gower(d)
    assert g[1, 2] == pytest.approx(0.5, abs=1e-12)  # |2-7|/10, equal nominal


def test_gower_matrix_properties(iris):
    g = gower(iris)
    assert g.shape == (150, 150)
    assert np.array_equal(g, g.T)
    assert (np.diag(g) == 0.0).all()
    assert g.min() >= 0.0 and g.max() <= 4.0


def test_pam_two_tight_pairs():
    dist = points_1d([0.0, 0.1, 10.0, 10.1])
    result = pam(dist, 2)
    assert result.cost == pytest.approx(0.2, abs=1e-12)
    assert result.assignment[0] == result.assignment[1]
    assert result.assignment[2] == result.assignment[3]
    assert result.assignment[0] != result.assignment[2]
    assert result.cost == pytest.approx(brute_force_pam_cost(dist, 2), abs=1e-12)


def test_pam_k_equals_n_boundary():
    dist = points_1d([0.0, 1.0, 2.0])
    result = pam(dist, 3)
    assert result.cost == 0.0
    assert sorted(result.medoids) == [0, 1, 2]


def test_pam_duplicates_share_cluster():
    dist = points_1d([0.0, 0.0, 5.0, 5.0])
    result = pam(dist, 2)
    assert result.assignment[0] == result.assignment[1]
    assert result.assignment[2] == result.assignment[3]


def test_pam_rejects_bad_k():
    dist = points_1d([0.0, 1.0])
    with pytest.raises(BadK):
        pam(dist, 1)
    with pytest.raises(BadK):
        pam(dist, 3)


def test_pam_matches_exhaustive_on_small_instances():
    rng = np.random.default_rng(21)
    for _ in range(60):
        n = int(rng.integers(4, 9))
        pts = rng.uniform(0, 1, (n, 2))
        dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        k = int(rng.integers(2, n))
        result = pam(dist, k)
        assert result.cost == pytest.approx(brute_force_pam_cost(dist, k), abs=1e-9)


def test_pam_cost_never_beaten_by_build_alone():
    rng = np.random.default_rng(22)
    pts = rng.uniform(0, 1, (40, 3))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    for k in (2, 4, 6):
        result = pam(dist, k)
        assert result.cost <= dist[:, result.medoids].min(axis=1).sum() + 1e-12


def test_silhouette_matches_brute_force():
    rng = np.random.default_rng(23)
    pts = rng.uniform(0, 1, (25, 2))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    result = pam(dist, 3)
    ours = silhouette_width(dist, result.assignment, 3)
    assert ours == pytest.approx(
        brute_force_silhouette(dist, result.assignment, 3), abs=1e-12
    )


def test_choose_k_two_blobs():
    dist = points_1d([0.0, 0.05, 0.1, 10.0, 10.05, 10.1])
    assert choose_k(dist) == 2


def test_choose_k_three_pairs():
    dist = points_1d([0.0, 0.1, 10.0, 10.1, 20.0, 20.1])
    assert choose_k(dist) == 3


def test_choose_k_identical_points_degenerate():
    dist = np.zeros((5, 5))
    assert choose_k(dist) == 2


def test_choose_k_too_few():
    with pytest.raises(TooFewInstances):
        choose_k(np.zeros((2, 2)))


def test_ari_relabeling_invariance():
    u = [0, 0, 1, 1, 2]
    v = [2, 2, 0, 0, 1]  # same partition, permuted labels
    assert ari(u, v) == 1.0


def test_ari_hand_case_minus_half():
    assert ari([0, 0, 1], [0, 1, 1]) == pytest.approx(-0.5, abs=1e-12)


def test_ari_one_cluster_vs_singletons_is_zero():
    assert ari([0, 0, 0, 0], [0, 1, 2, 3]) == pytest.approx(0.0, abs=1e-12)


def test_ari_matches_pair_counting_oracle():
    rng = np.random.default_rng(24)
    for _ in range(100):
        n = int(rng.integers(2, 31))
        u = rng.integers(0, int(rng.integers(1, 6)) + 1, n)
        v = rng.integers(0, int(rng.integers(1, 6)) + 1, n)
        assert ari(u, v) == pytest.approx(brute_force_ari(u, v), abs=1e-12)
        assert ari(u, v) == pytest.approx(ari(v, u), abs=1e-15)


def test_ari_length_mismatch():
    with pytest.raises(LengthMismatch):
        ari([0, 1], [0, 1, 2])


def test_cross_compare_self_is_one(iris):
    assert cross_compare(iris, iris) == 1.0


def test_ari_of_random_labelings_concentrates_near_zero():
    rng = np.random.default_rng(26)
    values = []
    for _ in range(40):
        u = rng.integers(0, 3, 200)
        v = rng.integers(0, 3, 200)
        values.append(ari(u, v))
    assert abs(float(np.mean(values))) < 0.02
    assert max(abs(v) for v in values) < 0.15


def test_cross_compare_independent_uniforms_below_structured_match():
    # Two uniform clouds over the same square still induce geometrically
    # correlated medoid partitions, so the joint ARI sits well above the
    # random-labeling level but clearly below a structural match (simulated:
    # mean ~0.4 over seeds, versus 1.0 for self and ~0.9 for iris pairs).
    rng = np.random.default_rng(25)
    schema = (
        AttributeSpec("u1", "numeric"),
        AttributeSpec("u2", "numeric"),
        AttributeSpec("c", "nominal", ("a", "b"), "class"),
    )
    def uniform_dataset(r):
        return Dataset(
            schema,
            tuple(
                (float(r.uniform()), float(r.uniform()), int(r.integers(0, 2)))
                for _ in range(200)
            ),
        )
    values = [
        cross_compare(uniform_dataset(rng), uniform_dataset(rng)) for _ in range(4)
    ]
    assert all(-0.2 < v < 0.85 for v in values)
    assert float(np.mean(values)) < 0.7


def test_cross_compare_schema_mismatch(iris, grid):
    with pytest.raises(SchemaMismatch):
        cross_compare(iris, grid)
