#!/usr/bin/env python3
"""Tests for the numerical core: WLS, IRLS, natural splines and random streams."""

import math

import numpy as np
import pytest
from scipy.linalg import null_space
from scipy.special import expit

from config.settings import DEFAULT_SEED, DEFAULT_SPLINE_DF
from numerics.linear import DesignMatrix, wls_fit
from numerics.logistic import logistic_fit
from numerics.rng import RngStream, draw
from numerics.splines import natural_spline_basis, spline_knots
from utils.errors import (
    ArgumentError,
    InsufficientDataError,
    SeparationError,
    SingularDesignError,
)


def _design(*columns, labels=None):
    values = np.column_stack(columns)
    return DesignMatrix.from_array(values, labels)


# ==================== WLS ====================

def test_wls_exact_line():
    x = np.array([0.0, 1.0, 2.0])
    fit = wls_fit(_design(np.ones(3), x, labels=['1', 'x']), x)
    assert np.allclose(fit.coefficients, [0.0, 1.0], atol=1e-12)
    assert fit.residual_variance == pytest.approx(0.0, abs=1e-20)
    assert fit.degrees_freedom == 1


def test_wls_weighted_mean():
    fit = wls_fit(_design(np.ones(2)), np.array([1.0, 3.0]), weights=np.array([1.0, 3.0]))
    assert fit.coefficients[0] == pytest.approx(2.5, abs=1e-12)


def test_wls_matches_normal_equations():
    rng = np.random.default_rng(11)
    n = 200
    X = np.column_stack([np.ones(n), rng.normal(size=n), rng.normal(size=n) ** 2])
    y = X @ np.array([0.3, -1.2, 0.7]) + rng.normal(size=n)
    w = rng.uniform(0.2, 3.0, size=n)

    fit = wls_fit(DesignMatrix.from_array(X), y, weights=w)

    gram = X.T @ (w[:, None] * X)
    beta = np.linalg.solve(gram, X.T @ (w * y))
    rss = float(np.sum(w * (y - X @ beta) ** 2))
    assert np.allclose(fit.coefficients, beta, rtol=0, atol=1e-10)
    assert fit.residual_variance == pytest.approx(rss / (n - 3), rel=1e-10)
    assert np.allclose(fit.gram_inverse, np.linalg.inv(gram), rtol=1e-8, atol=1e-12)


def test_wls_residuals_orthogonal_under_weights():
    rng = np.random.default_rng(12)
    n = 400
    X = np.column_stack([np.ones(n), rng.normal(size=n), rng.uniform(-2.0, 2.0, size=n)])
    y = X @ np.array([1.0, 0.5, -2.0]) + rng.standard_t(5, size=n)
    w = rng.uniform(0.1, 4.0, size=n)

    fit = wls_fit(DesignMatrix.from_array(X), y, weights=w)
    residuals = y - X @ fit.coefficients
    assert np.max(np.abs(X.T @ (w * residuals))) < 1e-8


def test_wls_drops_zero_weight_rows():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    y = np.array([0.0, 1.0, 2.0, 100.0])
    fit = wls_fit(_design(np.ones(4), x), y, weights=np.array([1.0, 1.0, 1.0, 0.0]))
    assert fit.n_used == 3
    assert np.allclose(fit.coefficients, [0.0, 1.0], atol=1e-12)


def test_wls_names_dependent_column():
    z = np.arange(5.0)
    with pytest.raises(SingularDesignError) as info:
        wls_fit(_design(np.ones(5), z, 2 * z, labels=['(Intercept)', 'z', 'z2']), z + 1.0)
    assert info.value.columns == ['z2']


def test_wls_too_few_rows():
    with pytest.raises(InsufficientDataError):
        wls_fit(_design(np.ones(2), np.array([0.0, 1.0]), np.array([1.0, 5.0])), np.array([1.0, 2.0]))


def test_wls_rejects_bad_weights():
    with pytest.raises(ArgumentError):
        wls_fit(_design(np.ones(3)), np.ones(3), weights=np.array([1.0, -1.0, 1.0]))


def test_linear_fit_predict_checks_columns():
    fit = wls_fit(_design(np.ones(3), np.arange(3.0), labels=['1', 'x']), np.arange(3.0))
    with pytest.raises(ArgumentError):
        fit.predict(_design(np.ones(2), np.arange(2.0), labels=['1', 'z']))


# ==================== IRLS ====================

def _newton_oracle(X, y, iterations=100):
    beta = np.zeros(X.shape[1])
    for _ in range(iterations):
        p = expit(X @ beta)
        hessian = X.T @ ((p * (1 - p))[:, None] * X)
        step = np.linalg.solve(hessian, X.T @ (y - p))
        beta = beta + step
        if np.max(np.abs(step)) < 1e-14:
            break
    return beta


def test_logistic_intercept_is_logit_of_mean():
    y = np.array([1.0, 0.0, 0.0, 0.0] * 25)
    fit = logistic_fit(_design(np.ones(100)), y)
    assert fit.converged
    assert fit.coefficients[0] == pytest.approx(math.log(0.25 / 0.75), abs=1e-8)


def test_logistic_matches_newton_oracle():
    rng = np.random.default_rng(3)
    n = 500
    X = np.column_stack([np.ones(n), rng.normal(size=n), rng.normal(size=n)])
    y = (rng.random(n) < expit(X @ np.array([-0.5, 1.0, -0.8]))).astype(float)

    fit = logistic_fit(DesignMatrix.from_array(X), y)
    assert fit.converged
    assert np.allclose(fit.coefficients, _newton_oracle(X, y), atol=1e-6)
    assert fit.max_abs_score < 1e-8


def test_logistic_score_equations_vanish():
    rng = np.random.default_rng(8)
    n = 2000
    X = np.column_stack([np.ones(n), rng.normal(size=n), rng.normal(1.0, 1.0, size=n)])
    y = (rng.random(n) < expit(X @ np.array([1.0, -1.0, 0.5]))).astype(float)

    fit = logistic_fit(DesignMatrix.from_array(X), y)
    score = X.T @ (y - fit.predict_proba(DesignMatrix.from_array(X)))
    assert np.max(np.abs(score)) < 1e-6


def test_logistic_deviance_stall_counts_as_converged():
    rng = np.random.default_rng(4)
    n = 300
    X = np.column_stack([np.ones(n), rng.normal(size=n)])
    y = (rng.random(n) < expit(0.4 + 0.9 * X[:, 1])).astype(float)

    # an unreachable score tolerance leaves the deviance rule as the only way out
    fit = logistic_fit(DesignMatrix.from_array(X), y, score_tol=0.0)
    assert fit.converged
    assert fit.iterations < 50
    assert np.allclose(fit.coefficients, _newton_oracle(X, y), atol=1e-6)


def test_logistic_perfect_separation():
    x = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    with pytest.raises(SeparationError):
        logistic_fit(_design(np.ones(6), x), x)


def test_logistic_rejects_non_binary_response():
    with pytest.raises(ArgumentError):
        logistic_fit(_design(np.ones(3)), np.array([0.0, 0.5, 1.0]))


# ==================== Splines ====================

def test_spline_knots_at_training_quantiles():
    train = np.arange(1.0, 101.0)
    knots = spline_knots(train, 3)
    expected = (np.quantile(train, [1 / 3, 2 / 3]) - 1.0) / 99.0
    assert knots.df == 3
    assert knots.knots[0] == 0.0 and knots.knots[-1] == 1.0
    assert np.allclose(knots.knots[1:-1], expected, atol=1e-12)


def test_spline_column_space_matches_truncated_power_oracle():
    rng = np.random.default_rng(5)
    train = rng.normal(size=300)
    knots = spline_knots(train, 3)
    u = (train - knots.lower) / (knots.upper - knots.lower)
    internal = np.asarray(knots.knots[1:-1])

    # cubic truncated-power basis with zero second derivative at both boundaries
    power = np.column_stack([np.ones_like(u), u, u ** 2, u ** 3]
                            + [np.maximum(u - k, 0.0) ** 3 for k in internal])
    constraints = np.array([
        [0.0, 0.0, 2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 6.0, *(6.0 * (1.0 - internal))],
    ])
    oracle = power @ null_space(constraints)

    ours = np.column_stack([np.ones_like(u), knots.basis(train)])
    assert np.linalg.matrix_rank(ours) == 4
    for a, b in ((ours, oracle), (oracle, ours)):
        coef, *_ = np.linalg.lstsq(b, a, rcond=None)
        assert np.max(np.abs(b @ coef - a)) < 1e-8


def test_spline_is_linear_beyond_boundary_knots():
    train = np.linspace(-2.0, 2.0, 50)
    knots = spline_knots(train, 4)
    for outside in (np.linspace(2.5, 6.0, 8), np.linspace(-7.0, -3.0, 8)):
        basis = knots.basis(outside)
        second_diff = basis[2:] - 2 * basis[1:-1] + basis[:-2]
        assert np.max(np.abs(second_diff)) < 1e-9


def test_natural_spline_basis_labels_and_shape():
    train = np.linspace(0.0, 1.0, 20)
    design = natural_spline_basis(train, np.array([0.1, 0.5]), 3, name='zp')
    assert design.columns == ('ns(zp,3)[1]', 'ns(zp,3)[2]', 'ns(zp,3)[3]')
    assert design.values.shape == (2, 3)


def test_natural_spline_basis_default_df():
    design = natural_spline_basis(np.linspace(0.0, 1.0, 20), np.array([0.2, 0.4]), name='zp')
    assert design.values.shape == (2, DEFAULT_SPLINE_DF)


def test_spline_df_one_is_linear():
    rng = np.random.default_rng(6)
    train = rng.normal(size=100)
    basis = natural_spline_basis(train, train, 1).values
    assert basis.shape == (100, 1)
    assert np.linalg.matrix_rank(np.column_stack([np.ones(100), basis, train])) == 2


def test_spline_rows_follow_eval_order():
    rng = np.random.default_rng(9)
    train = rng.normal(size=200)
    values = rng.normal(size=50)
    order = rng.permutation(50)
    basis = natural_spline_basis(train, values, 3).values
    assert np.array_equal(natural_spline_basis(train, values[order], 3).values, basis[order])
    assert np.array_equal(natural_spline_basis(train, values, 3).values, basis)


def test_spline_rejects_too_few_distinct_values():
    with pytest.raises(ArgumentError):
        spline_knots(np.array([1.0, 1.0, 2.0, 2.0]), 3)
    with pytest.raises(ArgumentError):
        spline_knots(np.arange(10.0), 0)


# ==================== Random streams ====================

def test_stream_is_deterministic_per_key():
    a = draw(RngStream(7, 'cell', 3, 'data'), 'standard_normal', 5)
    b = draw(RngStream(7, 'cell', 3, 'data'), 'standard_normal', 5)
    c = draw(RngStream(7, 'cell', 3, 'missingness'), 'standard_normal', 5)
    d = draw(RngStream(7, 'cell', 4, 'data'), 'standard_normal', 5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_child_stream_purpose_and_independence():
    parent = RngStream(1, 'cell', 0, 'imputation')
    child = parent.child('1/arm1')
    assert child.purpose == 'imputation/1/arm1'
    assert not np.array_equal(draw(child, 'uniform', 4), draw(parent.child('2/arm1'), 'uniform', 4))


def test_bernoulli_degenerate_probabilities():
    stream = RngStream(99)
    assert np.all(draw(stream, 'bernoulli', size=1000, p=0.0) == 0)
    assert np.all(draw(stream, 'bernoulli', size=1000, p=1.0) == 1)
    per_row = draw(stream, 'bernoulli', p=np.array([0.0, 1.0, 0.0, 1.0]))
    assert per_row.tolist() == [0, 1, 0, 1]


def test_standard_normal_mean_at_default_seed():
    values = draw(RngStream(DEFAULT_SEED, 'moments', 0, 'data'), 'standard_normal', 10 ** 6)
    assert abs(values.mean()) < 0.004


def test_chi_squared_mean():
    values = draw(RngStream(DEFAULT_SEED, 'moments', 0, 'data'), 'chi_squared', 10 ** 5, df=10)
    assert 9.85 < values.mean() < 10.15


def test_draw_rejects_unknown_law_and_bad_parameters():
    stream = RngStream(0)
    with pytest.raises(ArgumentError):
        draw(stream, 'cauchy', 3)
    with pytest.raises(ArgumentError):
        draw(stream, 'chi_squared', df=0)
    with pytest.raises(ArgumentError):
        draw(stream, 'bernoulli', p=1.5)
    with pytest.raises(ArgumentError):
        RngStream(-1)


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-v']))
