"""
Treatment-effect estimators for DR Impute Sim.

Both estimators are sample means of a per-row contribution psi; the
within-dataset variance is the sample variance of psi divided by n.

    IPW:   psi_i = X_i Y_i / pi_i - (1 - X_i) Y_i / (1 - pi_i)
    AIPW:  psi_i = mu1_i - mu0_i + X_i (Y_i - mu1_i) / pi_i
                   - (1 - X_i)(Y_i - mu0_i) / (1 - pi_i)
"""

import logging
from dataclasses import dataclass

import numpy as np

from dgp.datasets import EXPOSURE, OUTCOME
from estimators.outcome import fit_outcome_by_arm
from estimators.propensity import fit_propensity
from formula.terms import ModelFormula
from utils.errors import ArgumentError, DegenerateCellError

logger = logging.getLogger(__name__)

ESTIMATORS = ('aipw', 'ipw')


@dataclass(frozen=True)
class EstimateWithVariance:
    """One dataset's effect estimate and its within-dataset variance."""

    delta_hat: float
    within_variance: float
    n: int


def _summarize(psi: np.ndarray) -> EstimateWithVariance:
    n = psi.shape[0]
    if n < 2:
        raise ArgumentError(f"need at least 2 rows for a variance, got {n}")
    if not np.all(np.isfinite(psi)):
        raise DegenerateCellError("non-finite influence contributions")
    return EstimateWithVariance(
        delta_hat=float(np.mean(psi)),
        within_variance=float(np.var(psi, ddof=1) / n),
        n=n,
    )


def _check_lengths(*arrays) -> None:
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ArgumentError("estimator inputs have different lengths")


def ipw_from_components(x, y, pi) -> EstimateWithVariance:
    """Horvitz-Thompson style IPW estimate from fixed scores."""
    x, y, pi = (np.asarray(a, dtype=float) for a in (x, y, pi))
    _check_lengths(x, y, pi)
    psi = (x * y / pi) - ((1.0 - x) * y / (1.0 - pi))
    return _summarize(psi)


def aipw_from_components(x, y, pi, mu1, mu0) -> EstimateWithVariance:
    """Doubly robust estimate from fixed scores and arm predictions."""
    x, y, pi, mu1, mu0 = (np.asarray(a, dtype=float) for a in (x, y, pi, mu1, mu0))
    _check_lengths(x, y, pi, mu1, mu0)
    psi = (mu1 - mu0) + (x * (y - mu1) / pi) - ((1.0 - x) * (y - mu0) / (1.0 - pi))
    return _summarize(psi)


def ipw_estimate(data, ps_formula: ModelFormula) -> EstimateWithVariance:
    """IPW effect on a completed dataset."""
    scores = fit_propensity(data, ps_formula)
    return ipw_from_components(data.column(EXPOSURE), data.column(OUTCOME), scores.pi)


def aipw_estimate(data, ps_formula: ModelFormula,
                  outcome_formula: ModelFormula) -> EstimateWithVariance:
    """AIPW effect on a completed dataset."""
    scores = fit_propensity(data, ps_formula)
    arms = fit_outcome_by_arm(data, outcome_formula)
    return aipw_from_components(data.column(EXPOSURE), data.column(OUTCOME),
                                scores.pi, arms.mu1, arms.mu0)


def estimate(data, estimator: str, ps_formula: ModelFormula,
             outcome_formula: ModelFormula) -> EstimateWithVariance:
    """Dispatch on the estimator name ('aipw' or 'ipw')."""
    if estimator == 'aipw':
        return aipw_estimate(data, ps_formula, outcome_formula)
    if estimator == 'ipw':
        return ipw_estimate(data, ps_formula)
    raise ArgumentError(f"Unknown estimator '{estimator}'. Valid estimators: {', '.join(ESTIMATORS)}")


__all__ = [
    'ESTIMATORS',
    'EstimateWithVariance',
    'ipw_from_components',
    'aipw_from_components',
    'ipw_estimate',
    'aipw_estimate',
    'estimate',
]
