#!/usr/bin/env python3
"""Tests for the propensity model, arm outcome models and the IPW/AIPW estimators."""

import dataclasses

import numpy as np
import pytest

from dgp.datasets import CompleteDataset
from dgp.generators import generate
from estimators.effects import (
    aipw_estimate,
    aipw_from_components,
    estimate,
    ipw_from_components,
)
from estimators.outcome import fit_outcome_by_arm
from estimators.propensity import clip_propensity, fit_propensity
from formula.terms import parse_formula
from numerics.rng import RngStream
from utils.errors import ArgumentError


def _dataset(x, y, zc):
    x = np.asarray(x, dtype=np.int8)
    y = np.asarray(y, dtype=float)
    zc = np.asarray(zc, dtype=float)
    return CompleteDataset('linear_het', x=x, y=y, y1=y, y0=y,
                           covariates={'zc': zc, 'zi': np.zeros(len(x)), 'zp': np.zeros(len(x))})


# ==================== Closed forms ====================

def test_ipw_two_rows():
    result = ipw_from_components([1, 0], [2.0, 1.0], [0.5, 0.5])
    assert result.delta_hat == pytest.approx(1.0, abs=1e-15)
    assert result.n == 2


def test_aipw_hand_computed():
    result = aipw_from_components(
        x=[1, 1, 0], y=[3.0, 1.0, 2.0], pi=[0.5, 0.75, 0.25],
        mu1=[2.0, 2.0, 2.0], mu0=[1.0, 1.0, 1.0])
    assert result.delta_hat == pytest.approx(7 / 9, abs=1e-12)
    assert result.within_variance == pytest.approx(100 / 81, abs=1e-12)


def test_aipw_with_zero_residuals_is_outcome_model_estimate():
    x = np.array([1, 0, 1, 0, 1])
    y = np.array([2.0, 0.5, 3.0, -1.0, 1.5])
    mu1 = np.where(x == 1, y, 4.0)
    mu0 = np.where(x == 0, y, -2.0)
    pi = np.array([0.3, 0.6, 0.9, 0.2, 0.5])
    result = aipw_from_components(x, y, pi, mu1, mu0)
    assert result.delta_hat == pytest.approx(float(np.mean(mu1 - mu0)), abs=1e-12)


def test_aipw_without_outcome_model_is_horvitz_thompson():
    rng = np.random.default_rng(2)
    x = (rng.random(50) < 0.5).astype(float)
    y = rng.normal(size=50)
    half = np.full(50, 0.5)
    zeros = np.zeros(50)
    aipw = aipw_from_components(x, y, half, zeros, zeros)
    assert aipw.delta_hat == pytest.approx(float(np.mean(2 * x * y - 2 * (1 - x) * y)), abs=1e-12)
    assert aipw == ipw_from_components(x, y, half)


def test_ipw_all_treated():
    y = np.array([1.0, 2.0, 6.0])
    pi = clip_propensity(np.ones(3))
    result = ipw_from_components(np.ones(3), y, pi)
    assert result.delta_hat == pytest.approx(float(np.mean(y)), rel=1e-5)


def test_estimators_check_lengths():
    with pytest.raises(ArgumentError):
        ipw_from_components([1, 0], [1.0], [0.5, 0.5])
    with pytest.raises(ArgumentError):
        ipw_from_components([1], [1.0], [0.5])


# ==================== Nuisance models ====================

def test_clip_propensity():
    clipped = clip_propensity(np.array([1.0 - 1e-12, 1e-12, 0.3]))
    assert clipped[0] == 1.0 - 1e-6
    assert clipped[1] == 1e-6
    assert clipped[2] == 0.3


def test_propensity_without_signal_is_one_half():
    rng = np.random.default_rng(8)
    n = 4000
    # every zc value appears once in each arm, so the MLE slope is exactly 0
    zc = np.repeat(rng.normal(size=n // 2), 2)
    data = _dataset(np.tile([0, 1], n // 2), rng.normal(size=n), zc)
    scores = fit_propensity(data, parse_formula('x ~ zc'))
    assert scores.fit.converged
    assert np.allclose(scores.pi, 0.5, atol=1e-6)


def test_propensity_formula_rules():
    data = _dataset([0, 1, 0, 1], [1.0, 2.0, 3.0, 4.0], [0.1, 0.2, 0.4, 0.3])
    with pytest.raises(ArgumentError):
        fit_propensity(data, parse_formula('y ~ zc'))


def test_outcome_models_interpolate_exact_arms():
    zc = np.linspace(-1.0, 1.0, 10)
    x = np.array([1, 0] * 5)
    y = np.where(x == 1, 1.0 + 2.0 * zc, -1.0 + zc)
    arms = fit_outcome_by_arm(_dataset(x, y, zc), parse_formula('y ~ zc'))
    assert np.allclose(arms.mu1, 1.0 + 2.0 * zc, atol=1e-12)
    assert np.allclose(arms.mu0, -1.0 + zc, atol=1e-12)
    assert np.allclose(arms.mu1[x == 1], y[x == 1], atol=1e-12)


def test_outcome_models_match_arm_normal_equations():
    ds = generate('linear_het', 1500, RngStream(31))
    arms = fit_outcome_by_arm(ds, parse_formula('y ~ zc + zp'))
    X = np.column_stack([np.ones(ds.n), ds.covariates['zc'], ds.covariates['zp']])
    for arm, mu in ((1, arms.mu1), (0, arms.mu0)):
        rows = ds.x == arm
        beta = np.linalg.solve(X[rows].T @ X[rows], X[rows].T @ ds.y[rows])
        assert np.allclose(mu, X @ beta, atol=1e-9)


def test_propensity_decreases_in_confounder(large_sample):
    scores = fit_propensity(large_sample, parse_formula('x ~ zc'))
    slope = scores.fit.coefficients[scores.fit.columns.index('zc')]
    assert slope < -0.2


def test_outcome_formula_must_not_use_exposure():
    data = _dataset([0, 1, 0, 1], [1.0, 2.0, 3.0, 4.0], [0.1, 0.2, 0.4, 0.3])
    with pytest.raises(ArgumentError):
        fit_outcome_by_arm(data, parse_formula('y ~ x + zc'))


def test_estimate_dispatch():
    ds = generate('linear_hom', 500, RngStream(4))
    ps, outcome = parse_formula('x ~ zc'), parse_formula('y ~ zc + zp')
    assert estimate(ds, 'aipw', ps, outcome) == aipw_estimate(ds, ps, outcome)
    with pytest.raises(ArgumentError):
        estimate(ds, 'tmle', ps, outcome)


def test_aipw_ignores_outcome_shift():
    ds = generate('linear_het', 2000, RngStream(32))
    shifted = dataclasses.replace(ds, y=ds.y + 7.5, y1=ds.y1 + 7.5, y0=ds.y0 + 7.5)
    ps, outcome = parse_formula('x ~ zc'), parse_formula('y ~ zc + zp')
    base = aipw_estimate(ds, ps, outcome)
    moved = aipw_estimate(shifted, ps, outcome)
    assert moved.delta_hat == pytest.approx(base.delta_hat, abs=1e-9)
    assert moved.within_variance == pytest.approx(base.within_variance, rel=1e-9)


# ==================== Double robustness ====================

@pytest.fixture(scope='module')
def large_sample():
    return generate('linear_het', 100_000, RngStream(20240928, 'double-robustness', 0, 'data'))


@pytest.mark.parametrize('ps_text, outcome_text', [
    ('x ~ zc + zi', 'y ~ zc + zp'),
    ('x ~ zc + zi', 'y ~ zp'),
    ('x ~ zi', 'y ~ zc + zp'),
    ('x ~ zc', 'y ~ zc'),
])
def test_aipw_consistent_if_either_model_is_correct(large_sample, ps_text, outcome_text):
    result = aipw_estimate(large_sample, parse_formula(ps_text), parse_formula(outcome_text))
    se = np.sqrt(result.within_variance)
    assert se < 0.1
    assert abs(result.delta_hat - 1.0) < 4 * se


def test_aipw_biased_when_both_models_are_wrong(large_sample):
    result = aipw_estimate(large_sample, parse_formula('x ~ zi'), parse_formula('y ~ zp'))
    se = np.sqrt(result.within_variance)
    assert abs(result.delta_hat - 1.0) > 4 * se


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-v']))
