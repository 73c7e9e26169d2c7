#!/usr/bin/env python3
"""Tests for formula parsing and design construction."""

import numpy as np
import pytest

from config.settings import DEFAULT_SPLINE_DF
from dgp.datasets import CompleteDataset
from dgp.generators import apply_missingness, generate
from formula.design import INTERCEPT, build_design, response_vector, row_selector
from formula.terms import SPLINE, SQUARE, ModelFormula, Term, parse_formula
from numerics.rng import RngStream
from utils.errors import ArgumentError, ConfigError, InsufficientDataError, MaskedValueError


def _toy(n=3):
    x = np.array([0, 1, 1][:n], dtype=np.int8)
    zc = np.array([1.0, 2.0, 4.0][:n])
    zp = np.array([0.5, -1.0, 2.0][:n])
    y = np.array([1.0, 3.0, 5.0][:n])
    return CompleteDataset('linear_het', x=x, y=y, y1=y, y0=y,
                           covariates={'zc': zc, 'zi': np.zeros(n), 'zp': zp})


# ==================== Parsing ====================

@pytest.mark.parametrize('text', [
    'y ~ zc + zp',
    'zc ~ y + ns(zp,3) | x',
    'y ~ zc + I(zp^2) + zi | x',
    'y ~ x + zc + zp + zi',
    'y ~ zc + zp + zc:zp - 1',
    'y ~ 1',
])
def test_parse_and_print_agree(text):
    assert str(parse_formula(text)) == text


def test_parse_terms():
    formula = parse_formula('zc ~ y + I(zp^2) + ns(zi, df=4) | x')
    assert formula.response == 'zc'
    assert formula.terms == (Term('y'), Term('zp', SQUARE), Term('zi', SPLINE, 4))
    assert formula.stratify_by_exposure
    assert formula.uses_exposure
    assert formula.variables == frozenset({'y', 'zp', 'zi'})


def test_spline_without_df_uses_default():
    formula = parse_formula('y ~ ns(zp) + zc')
    assert formula.terms[0] == Term('zp', SPLINE, DEFAULT_SPLINE_DF)
    assert str(formula) == f'y ~ ns(zp,{DEFAULT_SPLINE_DF}) + zc'


def test_parse_intercept_controls():
    assert not parse_formula('y ~ zc - 1').include_intercept
    assert not parse_formula('y ~ zc + 0').include_intercept
    assert parse_formula('y ~ 1').terms == ()


@pytest.mark.parametrize('text', [
    'y zc + zp',
    'y ~ zc | zi',
    'y ~ zc - zp',
    'y ~ log(zc)',
    'y ~ a:b:c',
    'y ~ y + zc',
    'zc ~ x + y | x',
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ConfigError):
        parse_formula(text)


def test_without_and_unstratified():
    formula = parse_formula('zc ~ y + zp + zi + y:zp | x')
    dropped = formula.without('y')
    assert str(dropped) == 'zc ~ zp + zi | x'
    assert str(formula.unstratified()) == 'zc ~ y + zp + zi + y:zp'


def test_term_validation():
    with pytest.raises(ArgumentError):
        Term('zp', SPLINE, 0)
    with pytest.raises(ArgumentError):
        Term('zp', SQUARE, 3)
    with pytest.raises(ArgumentError):
        ModelFormula('y', (), include_intercept=False)


# ==================== Design construction ====================

def test_design_with_intercept_first():
    data = _toy()
    design = build_design(parse_formula('y ~ x + zc'), data)
    assert design.columns == (INTERCEPT, 'x', 'zc')
    assert design.values.shape == (3, 3)
    assert np.array_equal(design.values[:, 0], np.ones(3))
    assert np.array_equal(design.values[:, 2], [1.0, 2.0, 4.0])


def test_design_column_order_and_interactions():
    data = _toy()
    design = build_design(parse_formula('y ~ ns(zp,1) + zc + I(zp^2) + zc:zp'), data)
    assert design.columns == (INTERCEPT, 'zc', 'I(zp^2)', 'ns(zp,1)[1]', 'zc:zp')
    assert np.allclose(design.values[:, 2], [0.25, 1.0, 4.0])
    assert np.allclose(design.values[:, 4], [0.5, -2.0, 8.0])


def test_spline_knots_follow_training_rows():
    rng = np.random.default_rng(0)
    n = 60
    zp = rng.normal(size=n)
    data = CompleteDataset('linear_het', x=(zp > 0).astype(np.int8), y=zp, y1=zp, y0=zp,
                           covariates={'zc': zp, 'zi': zp, 'zp': zp})
    formula = parse_formula('y ~ ns(zp,3) - 1')
    train = np.arange(n) < 30
    everyone = build_design(formula, data, training_rows=train, eval_rows=np.ones(n, dtype=bool))
    subset = build_design(formula, data, training_rows=train)
    assert np.allclose(everyone.values[train], subset.values)

    with pytest.raises(InsufficientDataError):
        build_design(formula, data, training_rows=np.arange(3))


def test_masked_regressor_is_an_error():
    ds = generate('linear_het', 200, RngStream(1, 'f', 0, 'data'))
    observed = apply_missingness(ds, 'confounder', RngStream(1, 'f', 0, 'missingness'))
    formula = parse_formula('y ~ zc + zp')
    with pytest.raises(MaskedValueError):
        build_design(formula, observed)

    observed_rows = ~observed.missing_mask('zc')
    design = build_design(formula, observed, training_rows=observed_rows)
    assert design.rows == int(observed_rows.sum())
    assert np.all(np.isfinite(design.values))


def test_response_vector_and_row_selector():
    data = _toy()
    formula = parse_formula('y ~ zc')
    assert np.array_equal(response_vector(formula, data, [0, 2]), [1.0, 5.0])
    assert row_selector(None, 2).tolist() == [True, True]
    assert row_selector(np.array([1]), 3).tolist() == [False, True, False]
    with pytest.raises(ArgumentError):
        row_selector(np.array([True, False]), 3)


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-v']))
