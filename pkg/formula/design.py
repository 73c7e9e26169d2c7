"""
Design construction for DR Impute Sim.

Turns a ModelFormula plus a dataset into a DesignMatrix. Column order is
fixed: intercept, non-spline main terms in declaration order, spline
blocks in declaration order, interactions last. Spline knots come from the
training rows only, so the same basis extends to any evaluation rows.

Datasets are duck-typed: anything with ``n``, ``column(name)`` and
``missing_mask(name)`` works (observed, completed or complete data).
"""

import logging
from typing import List, Tuple

import numpy as np

from formula.terms import SPLINE, SQUARE, ModelFormula, Term
from numerics.linear import DesignMatrix
from numerics.splines import spline_knots
from utils.errors import ArgumentError, InsufficientDataError, MaskedValueError

logger = logging.getLogger(__name__)

INTERCEPT = '(Intercept)'


def row_selector(rows, n: int) -> np.ndarray:
    """Normalize a row selector (None, boolean mask or index array) to a mask."""
    if rows is None:
        return np.ones(n, dtype=bool)
    rows = np.asarray(rows)
    if rows.dtype == bool:
        if rows.shape != (n,):
            raise ArgumentError(f"row mask of shape {rows.shape} for {n} rows")
        return rows
    mask = np.zeros(n, dtype=bool)
    mask[rows.astype(int)] = True
    return mask


def _checked_column(data, name: str, rows: np.ndarray) -> np.ndarray:
    masked = data.missing_mask(name) & rows
    if masked.any():
        raise MaskedValueError(
            f"variable '{name}' is missing on {int(masked.sum())} of the requested rows")
    return np.asarray(data.column(name), dtype=float)


def _term_block(term: Term, data, train: np.ndarray, evaluate: np.ndarray,
                used: np.ndarray) -> Tuple[np.ndarray, List[str]]:
    values = _checked_column(data, term.variable, used)
    if term.transform == SQUARE:
        return (values[evaluate] ** 2)[:, None], [str(term)]
    if term.transform == SPLINE:
        try:
            knots = spline_knots(values[train], term.df)
        except ArgumentError as e:
            raise InsufficientDataError(f"cannot place knots for {term}: {e}") from e
        labels = [f"{term}[{j}]" for j in range(1, term.df + 1)]
        return knots.basis(values[evaluate]), labels
    return values[evaluate][:, None], [term.variable]


def build_design(formula: ModelFormula, data, training_rows=None,
                 eval_rows=None) -> DesignMatrix:
    """Realize the regressors of a formula.

    Args:
        formula: model formula (response and stratifier are not columns)
        data: dataset exposing column() and missing_mask()
        training_rows: rows the model is trained on; spline knots use
            these rows only. Defaults to all rows.
        eval_rows: rows to return; defaults to training_rows

    Returns:
        DesignMatrix with one row per evaluation row

    Raises:
        MaskedValueError: a referenced variable is masked on a used row
        InsufficientDataError: spline knots cannot be placed on the training rows
    """
    n = data.n
    train = row_selector(training_rows, n)
    evaluate = train if eval_rows is None else row_selector(eval_rows, n)
    used = train | evaluate
    n_eval = int(evaluate.sum())

    blocks: List[np.ndarray] = []
    labels: List[str] = []

    if formula.include_intercept:
        blocks.append(np.ones((n_eval, 1)))
        labels.append(INTERCEPT)

    main = [t for t in formula.terms if not t.is_spline]
    splines = [t for t in formula.terms if t.is_spline]
    for term in main + splines:
        block, names = _term_block(term, data, train, evaluate, used)
        blocks.append(block)
        labels.extend(names)

    for a, b in formula.interactions:
        block_a, names_a = _term_block(a, data, train, evaluate, used)
        block_b, names_b = _term_block(b, data, train, evaluate, used)
        for i, name_a in enumerate(names_a):
            for j, name_b in enumerate(names_b):
                blocks.append((block_a[:, i] * block_b[:, j])[:, None])
                labels.append(f"{name_a}:{name_b}")

    values = np.hstack(blocks) if blocks else np.empty((n_eval, 0))
    return DesignMatrix(values, tuple(labels))


def response_vector(formula: ModelFormula, data, rows=None) -> np.ndarray:
    """Response values on the selected rows; masked entries are an error."""
    mask = row_selector(rows, data.n)
    return _checked_column(data, formula.response, mask)[mask]


__all__ = ['INTERCEPT', 'row_selector', 'build_design', 'response_vector']
