"""
Propensity score model for DR Impute Sim.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.settings import PROPENSITY_CLIP
from formula.design import build_design, response_vector
from formula.terms import ModelFormula
from numerics.logistic import LogisticFit, logistic_fit
from utils.errors import ArgumentError

logger = logging.getLogger(__name__)


@dataclass
class PropensityScores:
    """Fitted P(X = 1 | covariates), clipped away from 0 and 1."""

    pi: np.ndarray
    fit: Optional[LogisticFit] = None


def clip_propensity(values, eps: float = PROPENSITY_CLIP) -> np.ndarray:
    return np.clip(np.asarray(values, dtype=float), eps, 1.0 - eps)


def fit_propensity(data, ps_formula: ModelFormula,
                   clip: float = PROPENSITY_CLIP) -> PropensityScores:
    """Logistic propensity model on all rows.

    Raises:
        ArgumentError: the formula does not model the exposure
        SeparationError: exposure perfectly separated by the covariates
    """
    if ps_formula.response != ps_formula.exposure:
        raise ArgumentError(f"propensity formula {ps_formula} must model the exposure "
                            f"'{ps_formula.exposure}'")
    if ps_formula.stratify_by_exposure:
        raise ArgumentError(f"propensity formula {ps_formula} cannot be stratified by the exposure")

    design = build_design(ps_formula, data)
    fit = logistic_fit(design, response_vector(ps_formula, data))
    pi = clip_propensity(fit.predict_proba(design), clip)
    logger.debug(f"propensity {ps_formula}: coef={np.round(fit.coefficients, 4).tolist()}, "
                 f"iterations={fit.iterations}")
    return PropensityScores(pi=pi, fit=fit)


__all__ = ['PropensityScores', 'clip_propensity', 'fit_propensity']
