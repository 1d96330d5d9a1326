"""Tests for saliency distances and correlation statistics."""

import itertools
import math
from types import SimpleNamespace

import numpy as np
import pytest
from scipy import stats

from semcont.errors import DataError, DimensionMismatchError, UndefinedCorrelationError
from semcont.explain.saliency import SaliencyMap
from semcont.metrics import correlate, kendall, midranks, msd, pearson, saliency_distance, spearman, wasserstein1
from semcont.metrics import correlation as correlation_module
from semcont.metrics.correlation import KENDALL_EXACT_MAX_N, kendall_normal_pvalue
from semcont.schemas.statistics import CorrelationMethod, CorrelationResult, DistanceKind


# ====================
# DISTANCES
# ====================
def test_msd_and_wasserstein_known_values():
    a = np.array([[0.0, 1.0]])
    b = np.array([[1.0, 0.0]])
    assert msd(a, b) == 1.0
    assert wasserstein1(a, b) == 0.0
    assert wasserstein1(np.zeros((2, 2)), np.full((2, 2), 0.25)) == pytest.approx(0.25)


def test_distances_are_zero_on_identical_maps(rng):
    values = rng.uniform(size=(6, 6))
    for kind in DistanceKind:
        assert saliency_distance(kind, SaliencyMap(values, "x"), SaliencyMap(values, "x")) == 0.0


def test_distance_normalizes_both_maps(rng):
    values = rng.uniform(size=(5, 5))
    scaled = SaliencyMap(values * 7.0 + 3.0, "x")
    assert saliency_distance(DistanceKind.MSD, SaliencyMap(values, "x"), scaled) == pytest.approx(0.0, abs=1e-12)


def test_distance_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        msd(np.zeros((2, 2)), np.zeros((3, 3)))


# ====================
# CORRELATIONS
# ====================
X = [1, 2, 3, 4, 5]
Y = [2, 1, 4, 3, 5]


def test_known_coefficients():
    assert pearson(X, Y).coefficient == pytest.approx(0.8)
    assert spearman(X, Y).coefficient == pytest.approx(0.8)
    tau = kendall(X, Y)
    assert tau.coefficient == pytest.approx(0.6)
    assert tau.p_value == pytest.approx(28 / 120)
    assert not tau.significant


def test_perfect_monotone_relation_is_significant():
    x = np.arange(12, dtype=float)
    for fn in (pearson, spearman, kendall):
        result = fn(x, 2 * x + 1)
        assert result.coefficient == pytest.approx(1.0)
        assert result.significant
        assert result.n == 12


def test_correlation_is_symmetric(rng):
    x, y = rng.normal(size=20), rng.normal(size=20)
    for fn in (pearson, spearman, kendall):
        assert fn(x, y).coefficient == pytest.approx(fn(y, x).coefficient)


def test_kendall_handles_ties():
    result = kendall([1, 2, 2, 3, 4, 5], [1, 1, 2, 3, 3, 5])
    assert 0 < result.coefficient <= 1
    assert 0 <= result.p_value <= 1


def test_midranks_average_ties():
    np.testing.assert_array_equal(midranks([1, 2, 2, 3]), [1.0, 2.5, 2.5, 4.0])


def test_constant_input_is_undefined():
    with pytest.raises(UndefinedCorrelationError):
        pearson([1, 2, 3], [5, 5, 5])
    assert correlate(CorrelationMethod.KENDALL, [1, 2, 3], [5, 5, 5]) is None


@pytest.mark.parametrize("x,y", [([1, 2], [1, 2]), ([1, 2, 3], [1, 2]), ([1, 2, np.nan], [1, 2, 3])])
def test_invalid_inputs(x, y):
    with pytest.raises(DataError):
        spearman(x, y)


def test_significance_follows_the_configured_level(monkeypatch):
    from semcont.config import settings

    monkeypatch.setattr(settings, "SIGNIFICANCE_LEVEL", 0.3)
    assert CorrelationResult(method="kendall", coefficient=0.6, p_value=0.25, n=5).significant
    monkeypatch.setattr(settings, "SIGNIFICANCE_LEVEL", 0.05)
    assert not CorrelationResult(method="kendall", coefficient=0.6, p_value=0.25, n=5).significant


def test_shuffled_sequences_are_rarely_significant():
    x = np.arange(30, dtype=float)
    significant = 0
    for seed in range(100):
        y = np.random.default_rng(seed).permutation(30).astype(float)
        significant += kendall(x, y).significant
    assert significant <= 10


def test_undefined_p_value_is_never_significant(monkeypatch):
    monkeypatch.setattr(
        correlation_module.stats, "pearsonr", lambda x, y: SimpleNamespace(statistic=0.5, pvalue=float("nan"))
    )
    result = pearson([1, 2, 3, 4], [1, 3, 2, 4])
    assert result.p_value == 1.0
    assert not result.significant


# ====================
# LITERAL EXAMPLES
# ====================
def test_wasserstein_of_sorted_values():
    a = np.array([[0.0, 0.0], [1.0, 1.0]])
    b = np.array([[0.0, 1.0], [1.0, 1.0]])
    assert wasserstein1(a, b) == pytest.approx(0.25)
    assert wasserstein1(np.zeros((3, 3)), np.ones((3, 3))) == pytest.approx(1.0)
    assert msd(np.zeros((3, 3)), np.ones((3, 3))) == 1.0


def test_small_rank_examples():
    assert spearman([1, 2, 3], [3, 1, 2]).coefficient == pytest.approx(-0.5)
    assert kendall([1, 2, 3], [1, 3, 2]).coefficient == pytest.approx(1 / 3)
    assert pearson([1, 2, 3, 4], [-1, -2, -3, -4]).coefficient == pytest.approx(-1.0)
    x, y = [1, 2, 3, 4, 5], [2, 1, 4, 3, 6]
    assert pearson(x, y).coefficient == pytest.approx(_pearson_oracle(x, y), abs=1e-12)


# ====================
# ORACLES
# ====================
def _pearson_oracle(x, y):
    n = len(x)
    mx, my = math.fsum(x) / n, math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def _rank_oracle(values):
    return [
        1 + sum(w < v for w in values) + (sum(w == v for w in values) - 1) / 2
        for v in values
    ]


def _tau_b_oracle(x, y):
    concordant = discordant = tied_x = tied_y = pairs = 0
    for i, j in itertools.combinations(range(len(x)), 2):
        pairs += 1
        dx, dy = x[i] - x[j], y[i] - y[j]
        tied_x += dx == 0
        tied_y += dy == 0
        if dx * dy > 0:
            concordant += 1
        elif dx * dy < 0:
            discordant += 1
    return (concordant - discordant) / math.sqrt((pairs - tied_x) * (pairs - tied_y))


def _random_instances(count, seed=2024):
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        n = int(rng.integers(3, 51))
        if produced % 2:
            x, y = rng.integers(0, 4, n).astype(float), rng.integers(0, 4, n).astype(float)
        else:
            x, y = rng.normal(size=n), rng.normal(size=n)
        if np.all(x == x[0]) or np.all(y == y[0]):
            continue
        produced += 1
        yield x.tolist(), y.tolist()


def test_correlations_match_brute_force_oracles():
    for x, y in _random_instances(500):
        assert pearson(x, y).coefficient == pytest.approx(_pearson_oracle(x, y), abs=1e-9)
        assert spearman(x, y).coefficient == pytest.approx(_pearson_oracle(_rank_oracle(x), _rank_oracle(y)), abs=1e-9)
        assert kendall(x, y).coefficient == pytest.approx(_tau_b_oracle(x, y), abs=1e-9)


def test_pearson_p_value_follows_student_t():
    for x, y in itertools.islice(_random_instances(100, seed=7), 0, None, 2):
        r = _pearson_oracle(x, y)
        n = len(x)
        t = r * math.sqrt((n - 2) / (1 - r * r))
        expected = 2 * stats.t.sf(abs(t), n - 2)
        assert pearson(x, y).p_value == pytest.approx(expected, rel=1e-6, abs=1e-12)


def _all_scores(n):
    """Kendall S of every permutation of 0..n-1 against the identity."""
    perms = np.array(list(itertools.permutations(range(n))))
    first, second = np.triu_indices(n, k=1)
    return perms, np.sign(perms[:, second] - perms[:, first]).sum(axis=1)


@pytest.mark.parametrize("n", range(4, KENDALL_EXACT_MAX_N + 1))
def test_exact_kendall_p_matches_enumeration(n):
    perms, scores = _all_scores(n)
    x = np.arange(n, dtype=float)
    rng = np.random.default_rng(n)
    for index in rng.choice(len(perms), size=12, replace=False):
        observed = abs(scores[index])
        expected = float(np.mean(np.abs(scores) >= observed))
        assert kendall(x, perms[index].astype(float)).p_value == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("n", range(5, KENDALL_EXACT_MAX_N + 1))
def test_normal_approximation_tracks_exact_p(n):
    perms, scores = _all_scores(n)
    x = np.arange(n, dtype=float)
    for score in np.unique(scores):
        y = perms[np.flatnonzero(scores == score)[0]].astype(float)
        exact = kendall(x, y).p_value
        assert abs(kendall_normal_pvalue(x, y) - exact) <= 0.08


def test_large_or_tied_samples_use_the_normal_approximation(rng):
    x, y = rng.normal(size=20), rng.normal(size=20)
    assert kendall(x, y).p_value == pytest.approx(kendall_normal_pvalue(x, y))
    tied_x, tied_y = [1, 2, 2, 3, 4], [1, 3, 2, 2, 5]
    assert kendall(tied_x, tied_y).p_value == pytest.approx(kendall_normal_pvalue(tied_x, tied_y))


# ====================
# PROPERTIES
# ====================
def test_correlations_are_invariant_under_increasing_transforms(rng):
    for _ in range(50):
        x, y = rng.uniform(size=15), rng.uniform(size=15)
        assert pearson(3.0 * x + 2.0, y).coefficient == pytest.approx(pearson(x, y).coefficient, abs=1e-9)
        for fn in (spearman, kendall):
            base = fn(x, y).coefficient
            assert fn(np.exp(x), y).coefficient == pytest.approx(base, abs=1e-9)
            assert fn(x, y ** 3).coefficient == pytest.approx(base, abs=1e-9)


def test_distance_metric_properties(rng):
    for _ in range(1000):
        a, b, c = rng.uniform(size=(3, 6, 6))
        for distance in (msd, wasserstein1):
            assert distance(a, a) == 0.0
            assert distance(a, b) == pytest.approx(distance(b, a), abs=1e-9)
            assert distance(a, b) >= 0.0
        assert wasserstein1(a, c) <= wasserstein1(a, b) + wasserstein1(b, c) + 1e-9
        sorted_gap = float(np.mean(np.abs(np.sort(a.ravel()) - np.sort(b.ravel()))))
        assert wasserstein1(a, b) == pytest.approx(sorted_gap, abs=1e-9)
