"""
Arm-specific outcome models for DR Impute Sim.

One unweighted least-squares fit among the exposed and one among the
unexposed, each predicting for every row. Spline knots are trained within
the arm.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from formula.design import build_design, response_vector
from formula.terms import ModelFormula
from numerics.linear import LinearFit, wls_fit
from utils.errors import ArgumentError, InsufficientDataError

logger = logging.getLogger(__name__)


@dataclass
class ArmPredictions:
    """Outcome-model predictions for all rows under each exposure."""

    mu1: np.ndarray
    mu0: np.ndarray
    fits: Dict[int, LinearFit]


def fit_outcome_by_arm(data, outcome_formula: ModelFormula) -> ArmPredictions:
    """Fit the outcome formula separately in each exposure arm.

    Raises:
        ArgumentError: the formula uses the exposure as a regressor
        InsufficientDataError: an arm has no more rows than columns
        SingularDesignError: rank-deficient arm design
    """
    exposure = outcome_formula.exposure
    if exposure in outcome_formula.variables:
        raise ArgumentError(
            f"outcome formula {outcome_formula} is fitted per arm and must not contain '{exposure}'")

    x = np.asarray(data.column(exposure))
    everyone = np.ones(data.n, dtype=bool)
    predictions = {}
    fits = {}
    for arm in (1, 0):
        rows = x == arm
        design = build_design(outcome_formula, data, training_rows=rows)
        n_arm = int(rows.sum())
        if n_arm <= design.cols:
            raise InsufficientDataError(
                f"arm x={arm} has {n_arm} rows for {design.cols} outcome-model columns")
        fit = wls_fit(design, response_vector(outcome_formula, data, rows))
        full = build_design(outcome_formula, data, training_rows=rows, eval_rows=everyone)
        predictions[arm] = fit.predict(full)
        fits[arm] = fit

    return ArmPredictions(mu1=predictions[1], mu0=predictions[0], fits=fits)


__all__ = ['ArmPredictions', 'fit_outcome_by_arm']
