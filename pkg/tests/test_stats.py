from __future__ import annotations

import math

import numpy as np
import pytest

from kernelsmith.errors import (
    DegenerateSample,
    EmptySample,
    NotADistribution,
    SchemaMismatch,
)
from kernelsmith.stats import compare, hellinger, ks_test, moments

from conftest import random_mixed_dataset, small_dataset


def brute_force_ks_statistic(x, y) -> float:
    """Independent oracle: evaluate both ECDFs at every sample point."""
    best = 0.0
    for v in list(x) + list(y):
        f1 = sum(1 for a in x if a <= v) / len(x)
        f2 = sum(1 for b in y if b <= v) / len(y)
        best = max(best, abs(f1 - f2))
    return best


def test_moments_of_zero_one():
    m = moments([0.0, 1.0])
    assert m.mean == 0.5
    assert m.std == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_moments_symmetric_sample_has_zero_skew():
    m = moments([0.0, 0.5, 1.0])
    assert m.skewness == pytest.approx(0.0, abs=1e-12)


def test_moments_constant_sample_degenerate():
    with pytest.raises(DegenerateSample):
        moments([0.7, 0.7, 0.7])
    with pytest.raises(DegenerateSample):
        moments([0.7])


def test_moments_uniform_kurtosis():
    # continuous uniform has excess kurtosis -1.2; a large grid approximates it
    values = np.linspace(0.0, 1.0, 10_001)
    m = moments(values)
    assert m.kurtosis == pytest.approx(-1.2, abs=1e-3)


def test_hellinger_identical_is_zero():
    p = {"a": 0.5, "b": 0.5}
    assert hellinger(p, dict(p)) == 0.0


def test_hellinger_disjoint_supports_is_one():
    assert hellinger({"a": 1.0}, {"b": 1.0}) == pytest.approx(1.0, abs=1e-15)


def test_hellinger_frozen_derived_value():
    # direct evaluation of (1/sqrt 2) sqrt(sum (sqrt p - sqrt q)^2):
    oracle = math.sqrt(
        (math.sqrt(0.5) - math.sqrt(0.25)) ** 2
        + (math.sqrt(0.5) - math.sqrt(0.75)) ** 2
    ) / math.sqrt(2.0)
    assert oracle == pytest.approx(0.18459191128251448, abs=1e-15)
    value = hellinger({"a": 0.5, "b": 0.5}, {"a": 0.25, "b": 0.75})
    assert value == pytest.approx(oracle, abs=1e-6)


def test_hellinger_symmetric_and_bounded():
    rng = np.random.default_rng(11)
    for _ in range(50):
        k = int(rng.integers(2, 6))
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        dp = {str(i): float(v) for i, v in enumerate(p)}
        dq = {str(i): float(v) for i, v in enumerate(q)}
        h = hellinger(dp, dq)
        assert 0.0 <= h <= 1.0 + 1e-12
        assert h == pytest.approx(hellinger(dq, dp), abs=1e-15)


def test_hellinger_triangle_inequality_spot_checks():
    rng = np.random.default_rng(12)
    for _ in range(30):
        p, q, r = (rng.dirichlet(np.ones(4)) for _ in range(3))
        dp, dq, dr = (
            {str(i): float(v) for i, v in enumerate(vec)} for vec in (p, q, r)
        )
        assert hellinger(dp, dr) <= hellinger(dp, dq) + hellinger(dq, dr) + 1e-12


def test_hellinger_rejects_non_distribution():
    with pytest.raises(NotADistribution):
        hellinger({"a": 0.4}, {"a": 1.0})


def test_ks_identical_samples():
    d, p = ks_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert d == 0.0
    assert p == 1.0


def test_ks_separated_samples():
    d, p = ks_test([0.0, 1.0, 2.0], [10.0, 11.0])
    assert d == 1.0
    assert p < 0.2


def test_ks_hand_case():
    d, _ = ks_test([1.0, 2.0], [1.5, 2.5])
    assert d == 0.5


def test_ks_matches_brute_force_enumeration():
    rng = np.random.default_rng(13)
    for _ in range(40):
        x = rng.normal(size=int(rng.integers(2, 25)))
        y = rng.normal(loc=rng.uniform(-1, 1), size=int(rng.integers(2, 25)))
        if rng.random() < 0.3:  # force ties across the samples
            y[0] = x[0]
        d, _ = ks_test(x, y)
        assert d == pytest.approx(brute_force_ks_statistic(x, y), abs=1e-12)


def test_ks_symmetry_and_monotone_p():
    rng = np.random.default_rng(14)
    x = rng.normal(size=30)
    y = rng.normal(size=40)
    d1, p1 = ks_test(x, y)
    d2, p2 = ks_test(y, x)
    assert d1 == d2 and p1 == p2
    # shifting y further increases D and decreases p at fixed sizes
    d3, p3 = ks_test(x, y + 3.0)
    assert d3 >= d1
    assert p3 <= p1


def test_ks_empty_sample():
    with pytest.raises(EmptySample):
        ks_test([], [1.0])


def test_ks_p_value_against_scipy_when_available():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(15)
    x = rng.normal(size=80)
    y = rng.normal(loc=0.4, size=90)
    d, p = ks_test(x, y)
    ref = scipy_stats.ks_2samp(x, y, mode="asymp")
    assert d == pytest.approx(ref.statistic, abs=1e-12)
    assert p == pytest.approx(ref.pvalue, abs=0.02)


def test_compare_self_is_zero_summary(iris):
    s = compare(iris, iris)
    assert s.delta_mean == 0.0
    assert s.delta_std == 0.0
    assert s.ks_reject_pct == 0.0
    assert s.mean_hellinger is None  # iris has no discrete features


def test_compare_mixed_self_zero():
    rng = np.random.default_rng(16)
    d = random_mixed_dataset(rng, n_range=(20, 40))
    s = compare(d, d)
    if s.delta_mean is not None:
        assert s.delta_mean == 0.0
    if s.mean_hellinger is not None:
        assert s.mean_hellinger == 0.0


def test_compare_schema_mismatch(iris, grid):
    with pytest.raises(SchemaMismatch):
        compare(iris, grid)


@pytest.mark.parametrize("fixture_name", ["iris", "grid"])
def test_compare_original_vs_generated_mean_band(fixture_name, request):
    import kernelsmith as ks

    d = request.getfixturevalue(fixture_name)
    spec = ks.build(d, seed=1)
    out = ks.generate(spec, ks.SamplingConfig(size=d.n, seed=2))
    s = compare(d, out)
    assert abs(s.delta_mean) <= 0.05
    assert abs(s.delta_std) <= 0.05


def test_compare_reports_absent_fields_for_degenerate_columns():
    d1 = small_dataset(((1.0, 0), (1.0, 1)))
    d2 = small_dataset(((1.0, 0), (1.0, 1)))
    s = compare(d1, d2)
    assert s.delta_mean is None
    assert s.ks_reject_pct == 0.0  # constant-equal columns still count as tested
    assert s.attributes[0].degenerate
