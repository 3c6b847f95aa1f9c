#!/usr/bin/env python3
"""
🧪 TEST uLSIF - Rilevamento FPGA Riciclati
Kernel, sistema ridge, LOOCV analitica contro rifit esplicito, rapporto di densità gaussiano
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ulsif import (
    GramStats,
    KernelSpec,
    UlsifModel,
    UlsifSettings,
    anomaly_scores,
    bandwidth_grid,
    compute_gram_stats,
    density_ratio,
    explicit_loocv_score,
    kernel_matrix,
    loocv_scores,
    model_to_dict,
    rbf_kernel,
    ridge_solution,
    select_centers,
    select_model,
    solve_alpha,
)
from utils import InvalidInputError, InvalidParameterError

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
widths = st.floats(min_value=1e-2, max_value=1e3, allow_nan=False, allow_infinity=False)


@given(finite, finite, widths)
def test_kernel_symmetric_and_bounded(x, c, w):
    k = rbf_kernel(x, c, w)
    assert 0.0 <= k <= 1.0
    assert k == rbf_kernel(c, x, w)


@given(finite, widths)
def test_kernel_is_one_on_center(x, w):
    assert rbf_kernel(x, x, w) == 1.0


def test_kernel_known_value():
    assert rbf_kernel(1.0, 0.0, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-15)


@pytest.mark.parametrize("w", [0.0, -1.0, float("nan")])
def test_kernel_rejects_bad_width(w):
    with pytest.raises(InvalidParameterError):
        rbf_kernel(0.0, 0.0, w)


def test_kernel_matrix_matches_scalar_kernel(rng):
    samples = rng.normal(size=7)
    centers = rng.normal(size=4)
    matrix = kernel_matrix(samples, centers, 0.7)
    assert matrix.shape == (7, 4)
    for i in range(7):
        for j in range(4):
            assert matrix[i, j] == pytest.approx(rbf_kernel(samples[i], centers[j], 0.7), rel=1e-12)


@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=40))
def test_gram_matrix_is_psd(seed, n):
    rng = np.random.default_rng(seed)
    inlier, test = rng.normal(size=n), rng.normal(0.3, 1.2, size=n)
    stats = compute_gram_stats(inlier, test, KernelSpec(width=0.5, centers=select_centers(test)))
    assert np.allclose(stats.H_hat, stats.H_hat.T)
    assert np.linalg.eigvalsh(stats.H_hat).min() >= -1e-10
    assert np.all(stats.h_hat > 0)


@settings(max_examples=1000)
@given(st.integers(min_value=0, max_value=2**32 - 1),
       st.integers(min_value=1, max_value=25),
       st.sampled_from([1e-3, 1e-2, 1e-1, 1.0, 10.0]))
def test_ridge_residual_and_nonnegative_alpha(seed, b, lam):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(b, b + 3))
    stats = GramStats(H_hat=a @ a.T / (b + 3), h_hat=rng.uniform(0.0, 1.0, size=b))
    system = stats.H_hat + lam * np.eye(b)

    alpha_tilde = ridge_solution(stats, lam)
    residual = np.linalg.norm(system @ alpha_tilde - stats.h_hat)
    assert residual <= 1e-8 * max(np.linalg.norm(stats.h_hat), 1.0)

    alpha = solve_alpha(stats, lam)
    assert np.all(alpha >= 0)
    assert np.array_equal(alpha, np.maximum(alpha_tilde, 0.0))


def test_ridge_single_center_closed_form():
    stats = GramStats(H_hat=np.array([[0.8]]), h_hat=np.array([0.6]))
    assert ridge_solution(stats, 0.2)[0] == pytest.approx(0.6 / 1.0, rel=1e-14)


def test_ridge_rejects_nonpositive_lambda():
    stats = GramStats(H_hat=np.eye(2), h_hat=np.ones(2))
    with pytest.raises(InvalidParameterError):
        ridge_solution(stats, 0.0)


def test_select_centers_strided():
    test = np.arange(250, dtype=float)
    centers = select_centers(test, 100)
    assert centers.size == 100
    assert np.array_equal(centers, (np.arange(100) * 250) // 100)
    assert np.array_equal(select_centers(test[:40], 100), test[:40])


def test_bandwidth_grid_median_heuristic():
    grid = bandwidth_grid([0.0, 1.0], [2.0], multipliers=[2.0, 0.5, 1.0])
    # unica distanza interna: 1
    assert np.allclose(grid, [0.5, 1.0, 2.0])


def test_bandwidth_grid_fallback_on_constant_data():
    grid = bandwidth_grid([3.0] * 5, [3.0] * 5, fallback_width=1.0)
    assert grid.tolist() == [1.0]


def test_bandwidth_grid_ignores_offset_between_vectors(rng):
    inlier = rng.normal(0.0, 0.05, size=30)
    test = rng.normal(0.0, 0.05, size=30)
    assert np.allclose(bandwidth_grid(inlier, test + 5.0), bandwidth_grid(inlier, test))


@given(st.integers(min_value=0, max_value=2**32 - 1), st.floats(min_value=-500.0, max_value=500.0))
def test_scores_shift_equivariant(seed, delta):
    gen = np.random.default_rng(seed)
    inlier = gen.normal(0.0, 1.0, size=15)
    test = gen.normal(0.3, 1.0, size=15)
    base = select_model(inlier, test)
    moved = select_model(inlier + delta, test + delta)
    assert moved.kernel.width == pytest.approx(base.kernel.width, rel=1e-9)
    assert moved.lam == base.lam
    for samples in (inlier, test):
        expected = anomaly_scores(base, samples).scores
        actual = anomaly_scores(moved, samples + delta).scores
        assert np.allclose(actual, expected, rtol=1e-6, atol=1e-6)


def test_analytic_loocv_matches_explicit_refit(rng):
    inlier = rng.normal(0.0, 1.0, size=15)
    test = rng.normal(0.4, 1.1, size=12)
    centers = select_centers(test)
    ws, lams = [0.5, 1.0, 2.0], [1e-2, 1e-1, 1.0]

    analytic = loocv_scores(inlier, test, centers, ws, lams)
    for i, w in enumerate(ws):
        for j, lam in enumerate(lams):
            explicit = explicit_loocv_score(inlier, test, centers, w, lam)
            assert analytic[i, j] == pytest.approx(explicit, rel=1e-6, abs=1e-8)


def test_select_model_explicit_mode_agrees_with_analytic(rng):
    inlier = rng.normal(size=20)
    test = rng.normal(0.5, 1.0, size=20)
    analytic = select_model(inlier, test, settings=UlsifSettings(loocv="analytic"))
    explicit = select_model(inlier, test, settings=UlsifSettings(loocv="explicit"))
    assert analytic.kernel.width == explicit.kernel.width
    assert analytic.lam == explicit.lam
    assert np.allclose(analytic.alpha, explicit.alpha, rtol=1e-6, atol=1e-9)


def test_gaussian_density_ratio_oracle():
    rng = np.random.default_rng(2024)
    inlier = rng.normal(0.0, 1.0, size=1000)
    test = rng.normal(0.5, 1.0, size=1000)
    model = select_model(inlier, test)

    points = np.array([-1.0, 0.0, 1.0])
    expected = np.exp(0.5 * points - 0.125)
    estimated = density_ratio(model, points)
    assert np.all(np.abs(estimated - expected) / expected <= 0.3)


def test_same_distribution_ratio_near_one():
    rng = np.random.default_rng(99)
    inlier = rng.normal(size=1000)
    test = rng.normal(size=1000)
    model = select_model(inlier, test)
    assert 0.8 <= float(np.mean(density_ratio(model, test))) <= 1.2


def test_select_model_sorts_grids_and_reports_choice(rng):
    inlier, test = rng.normal(size=30), rng.normal(size=30)
    model = select_model(inlier, test, w_grid=[2.0, 0.5, 1.0], lambda_grid=[1.0, 0.1])
    assert model.kernel.width in (0.5, 1.0, 2.0)
    assert model.lam in (0.1, 1.0)
    assert np.isfinite(model.loocv_score)
    assert np.all(model.alpha >= 0)


def test_select_model_constant_data_uses_fallback_width():
    model = select_model([3.0] * 10, [3.0] * 10)
    assert model.kernel.width == 1.0


@pytest.mark.parametrize("inlier, test", [
    ([1.0], [1.0, 2.0]),
    ([1.0, 2.0], []),
    ([1.0, float("nan")], [1.0, 2.0]),
    ([1.0, 2.0], [1.0, float("inf")]),
])
def test_select_model_rejects_bad_samples(inlier, test):
    with pytest.raises(InvalidInputError):
        select_model(inlier, test)


def test_select_model_rejects_empty_grid(rng):
    with pytest.raises(InvalidParameterError):
        select_model(rng.normal(size=5), rng.normal(size=5), lambda_grid=[])


def test_score_of_unit_ratio_is_positive_zero():
    model = UlsifModel(kernel=KernelSpec(width=1.0, centers=np.array([0.0])), lam=0.1,
                       alpha=np.array([1.0]), loocv_score=0.0)
    scores = anomaly_scores(model, [0.0])
    assert scores.scores[0] == 0.0
    assert not np.signbit(scores.scores[0])


def test_zero_ratio_hits_floor():
    model = UlsifModel(kernel=KernelSpec(width=1.0, centers=np.array([0.0])), lam=0.1,
                       alpha=np.array([0.0]), loocv_score=0.0)
    scores = anomaly_scores(model, [5.0, -5.0], source="left")
    assert np.allclose(scores.scores, -math.log(1e-12))
    assert scores.sources == ("left", "left")


def test_identical_samples_score_low(rng):
    samples = rng.normal(180.0, 0.05, size=94)
    model = select_model(samples, samples)
    assert anomaly_scores(model, samples).max_score < 2.0


def test_independent_fresh_columns_stay_in_band(rng):
    left = rng.normal(180.0, 0.05, size=94)
    right = rng.normal(180.03, 0.05, size=94)
    for inlier, test in ((left, right), (right, left)):
        model = select_model(inlier, test)
        assert model.kernel.width >= 0.03
        both = np.concatenate([inlier, test])
        assert anomaly_scores(model, both).max_score < 10.0


def test_outlier_scored_higher_than_inliers(rng):
    inlier = np.concatenate([rng.normal(0.0, 0.05, size=40), [-3.0]])
    test = rng.normal(0.0, 0.05, size=41)
    model = select_model(inlier, test)
    scores = anomaly_scores(model, inlier).scores
    assert int(np.argmax(scores)) == 40


def test_model_to_dict_is_json_ready(rng):
    model = select_model(rng.normal(size=10), rng.normal(size=10))
    payload = model_to_dict(model)
    assert set(payload) == {'centers', 'w', 'lambda', 'alpha', 'loocv_score'}
    assert len(payload['centers']) == len(payload['alpha']) == 10
    assert payload == model.to_dict()


def test_settings_validation():
    with pytest.raises(InvalidParameterError):
        UlsifSettings(lambda_grid=())
    with pytest.raises(InvalidParameterError):
        UlsifSettings(loocv="fast")
    with pytest.raises(InvalidParameterError):
        UlsifSettings(max_centers=0)
