#!/usr/bin/env python3
"""Tests for Rubin's rules pooling."""

import math

import numpy as np
import pytest
from scipy import stats

from estimators.effects import EstimateWithVariance
from pooling.rubin import normal_interval, pool_rubin, rubin_dof
from utils.errors import ArgumentError


def _estimates(deltas, variances):
    return [EstimateWithVariance(delta_hat=d, within_variance=v, n=100)
            for d, v in zip(deltas, variances)]


def test_pool_two_estimates():
    pooled = pool_rubin(_estimates([1.0, 3.0], [1.0, 1.0]))
    assert pooled.delta_bar == 2.0
    assert pooled.u_bar == 1.0
    assert pooled.b == 2.0
    assert pooled.t == pytest.approx(4.0, abs=1e-12)
    assert pooled.se == pytest.approx(2.0, abs=1e-12)
    assert pooled.m == 2

    dof = (1 + 1 / 3) ** 2
    assert pooled.dof == pytest.approx(dof, rel=1e-12)
    half = stats.t.ppf(0.975, dof) * 2.0
    assert pooled.ci_low == pytest.approx(2.0 - half, rel=1e-12)
    assert pooled.ci_high == pytest.approx(2.0 + half, rel=1e-12)


def test_identical_estimates_use_normal_quantile():
    pooled = pool_rubin(_estimates([0.7] * 5, [0.04] * 5))
    assert pooled.b == 0.0
    assert pooled.t == pytest.approx(0.04, abs=1e-15)
    assert math.isinf(pooled.dof)
    assert pooled.ci_high - pooled.delta_bar == pytest.approx(1.959963985 * 0.2, abs=1e-8)


def test_rubin_dof():
    assert math.isinf(rubin_dof(10, 1.0, 0.0))
    assert rubin_dof(20, 1.0, 1.0) == pytest.approx(19 * (1 + 1 / 1.05) ** 2)


def test_pooling_ignores_order():
    rng = np.random.default_rng(21)
    deltas, variances = rng.normal(1.0, 0.1, size=12), rng.uniform(0.01, 0.02, size=12)
    order = rng.permutation(12)
    a = pool_rubin(_estimates(deltas, variances))
    b = pool_rubin(_estimates(deltas[order], variances[order]))
    for field in ('delta_bar', 'u_bar', 'b', 't', 'dof', 'ci_low', 'ci_high'):
        assert getattr(b, field) == pytest.approx(getattr(a, field), rel=1e-12)


def test_pooling_is_affine_equivariant():
    rng = np.random.default_rng(22)
    deltas, variances = rng.normal(1.0, 0.1, size=8), rng.uniform(0.01, 0.02, size=8)
    scale, shift = -2.5, 3.0
    base = pool_rubin(_estimates(deltas, variances))
    moved = pool_rubin(_estimates(scale * deltas + shift, scale ** 2 * variances))
    assert moved.delta_bar == pytest.approx(scale * base.delta_bar + shift, rel=1e-12)
    assert moved.t == pytest.approx(scale ** 2 * base.t, rel=1e-12)
    assert moved.dof == pytest.approx(base.dof, rel=1e-10)


def test_dof_matches_classical_formula_for_twenty_imputations():
    rng = np.random.default_rng(23)
    deltas, variances = rng.normal(1.0, 0.05, size=20), rng.uniform(0.002, 0.004, size=20)
    pooled = pool_rubin(_estimates(deltas, variances))

    u_bar = sum(variances) / 20
    mean = sum(deltas) / 20
    b = sum((d - mean) ** 2 for d in deltas) / 19
    r = (1 + 1 / 20) * b / u_bar
    assert pooled.dof == pytest.approx(19 * (1 + 1 / r) ** 2, rel=1e-10)
    assert pooled.t == pytest.approx(u_bar + (1 + 1 / 20) * b, rel=1e-10)


def test_interval_width_follows_confidence():
    estimates = _estimates([0.9, 1.1, 1.0, 1.05], [0.01] * 4)
    narrow = pool_rubin(estimates, confidence=0.8)
    wide = pool_rubin(estimates, confidence=0.99)
    assert wide.ci_high - wide.ci_low > narrow.ci_high - narrow.ci_low
    assert narrow.delta_bar == wide.delta_bar


def test_pooling_rejects_bad_input():
    with pytest.raises(ArgumentError):
        pool_rubin(_estimates([1.0], [1.0]))
    with pytest.raises(ArgumentError):
        pool_rubin(_estimates([1.0, float('nan')], [1.0, 1.0]))
    with pytest.raises(ArgumentError):
        pool_rubin(_estimates([1.0, 2.0], [1.0, 1.0]), confidence=1.0)


def test_normal_interval_for_single_dataset():
    result = normal_interval(EstimateWithVariance(delta_hat=1.1, within_variance=0.01, n=50))
    assert result.m == 1 and result.b == 0.0 and math.isinf(result.dof)
    assert result.se == pytest.approx(0.1)
    assert result.covers(1.0)
    assert not result.covers(1.5)


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-v']))
