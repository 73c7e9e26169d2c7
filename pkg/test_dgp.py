#!/usr/bin/env python3
"""Tests for data generation, missingness and the dataset containers."""

import csv
import os

import numpy as np
import pytest
from scipy.special import expit

from dgp.datasets import DGP_KINDS, ObservedDataset, confounder_name, covariate_names
from dgp.export import write_dataset_csv
from dgp.generators import (
    apply_missingness,
    exposure_probability_multi,
    generate,
    missingness_probability,
)
from numerics.rng import RngStream
from utils.errors import ArgumentError, MaskedValueError


def _stream(purpose='data', rep=0):
    return RngStream(20240928, 'test', rep, purpose)


@pytest.mark.parametrize('kind', DGP_KINDS)
def test_true_effect_is_one(kind):
    ds = generate(kind, 200_000, _stream())
    assert ds.true_ate == 1.0
    assert np.mean(ds.y1 - ds.y0) == pytest.approx(1.0, abs=0.01)
    assert np.array_equal(ds.y, np.where(ds.x == 1, ds.y1, ds.y0))


def test_homogeneous_effect_is_constant():
    ds = generate('linear_hom', 1000, _stream())
    assert np.allclose(ds.y1 - ds.y0, 1.0)


def test_primary_exposure_prevalence():
    # 1 - zc + 2 zi ~ N(0, 5), so the marginal prevalence is one half
    ds = generate('linear_het', 100_000, _stream())
    assert np.mean(ds.x) == pytest.approx(0.5, abs=0.01)


def test_multi_exposure_prevalence_matches_quadrature():
    nodes, weights = np.polynomial.hermite_e.hermegauss(60)
    weights = weights / weights.sum()
    zc1, zc2 = np.meshgrid(1.0 + nodes, 1.0 + nodes, indexing='ij')
    expected = float(np.sum(np.outer(weights, weights) * exposure_probability_multi(2, zc1, zc2)))

    ds = generate('multi_2', 100_000, _stream())
    assert np.mean(ds.x) == pytest.approx(expected, abs=0.01)


def test_generation_is_reproducible():
    a = generate('nonlinear_het', 50, _stream())
    b = generate('nonlinear_het', 50, _stream())
    c = generate('nonlinear_het', 50, _stream(rep=1))
    assert np.array_equal(a.y, b.y) and np.array_equal(a.x, b.x)
    assert not np.array_equal(a.y, c.y)


def test_covariate_names():
    assert covariate_names('linear_het') == ('zc', 'zi', 'zp')
    assert covariate_names('multi_3') == ('zc1', 'zc2')
    assert confounder_name('multi_1') == 'zc1'
    with pytest.raises(ArgumentError):
        generate('quadratic', 10, _stream())
    with pytest.raises(ArgumentError):
        generate('linear_het', 0, _stream())


@pytest.mark.parametrize('target', ['outcome', 'confounder'])
def test_missingness_rate_near_twenty_percent(target):
    ds = generate('linear_het', 50_000, _stream())
    observed = apply_missingness(ds, target, _stream('missingness'))
    mask = observed.missing_mask(observed.target_variable)
    assert 0.12 < mask.mean() < 0.28
    assert mask.mean() == pytest.approx(missingness_probability(ds, target).mean(), abs=0.01)


def test_confounder_missingness_depends_on_exposure():
    ds = generate('linear_het', 10, _stream())
    prob = missingness_probability(ds, 'confounder')
    assert np.allclose(prob, expit(-1.15 - 0.5 * ds.x))


def test_confounder_missingness_is_random_within_arms():
    ds = generate('linear_het', 200_000, _stream(rep=1))
    observed = apply_missingness(ds, 'confounder', _stream('missingness', rep=1))
    mask = observed.missing_mask('zc')
    for arm in (0, 1):
        rows = ds.x == arm
        assert mask[rows].mean() == pytest.approx(expit(-1.15 - 0.5 * arm), abs=0.01)
        for values in (ds.covariates['zc'], ds.y):
            hidden, shown = values[rows & mask], values[rows & ~mask]
            se = np.sqrt(hidden.var() / hidden.size + shown.var() / shown.size)
            assert abs(hidden.mean() - shown.mean()) < 4 * se


def test_observed_dataset_hides_masked_values():
    ds = generate('linear_het', 500, _stream())
    observed = apply_missingness(ds, 'outcome', _stream('missingness'))
    y = observed.column('y')
    mask = observed.missing_mask('y')
    assert mask.any()
    assert np.all(np.isnan(y[mask]))
    assert np.array_equal(y[~mask], ds.y[~mask])
    assert not observed.missing_mask('zc').any()
    assert not y.flags.writeable
    with pytest.raises(MaskedValueError):
        observed.column('y1')


def test_force_complete_masks_nothing():
    ds = generate('multi_1', 300, _stream())
    observed = apply_missingness(ds, 'confounder', _stream('missingness'), force_complete=True)
    assert observed.fully_observed().all()
    assert observed.target_variable == 'zc1'


def test_observed_dataset_validates_target():
    ds = generate('linear_het', 5, _stream())
    with pytest.raises(ArgumentError):
        ObservedDataset(ds, np.zeros(5), np.zeros(5), 'zc', 'exposure')


def test_write_dataset_csv(tmp_path):
    ds = generate('linear_het', 40, _stream())
    observed = apply_missingness(ds, 'confounder', _stream('missingness'))
    path = os.path.join(tmp_path, 'data.csv')
    write_dataset_csv(observed, path)

    with open(path, newline='') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 40
    assert list(rows[0]) == ['x', 'y', 'zc', 'zi', 'zp', 'miss_y', 'miss_conf']
    for row, missing in zip(rows, observed.miss_conf):
        assert (row['zc'] == '') == bool(missing)
        assert row['miss_conf'] == str(int(missing))
    assert 'y1' not in rows[0]


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-v']))
