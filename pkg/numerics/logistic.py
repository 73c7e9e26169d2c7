"""
Logistic regression by iteratively reweighted least squares.

Each Newton step is a weighted least-squares solve of the working response
on the design, reusing wls_fit. The fit has converged once the coefficient
step is small and either the score or the relative deviance change is below
its tolerance. Under separation the score and the deviance also flatten
while the coefficients keep running off; the step guard tells the two apart.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import expit

from config.settings import (
    IRLS_DEVIANCE_TOL,
    IRLS_MAX_ITER,
    IRLS_SCORE_TOL,
    IRLS_STEP_TOL,
    SEPARATION_EPS,
)
from numerics.linear import DesignMatrix, _as_design, wls_fit
from utils.errors import ArgumentError, SeparationError

logger = logging.getLogger(__name__)

# lower bound on IRLS weights; only reached by rows already pinned to 0/1
_MIN_WEIGHT = 1e-20

# consecutive pinned, score-flat iterations with a large step before giving up
_SEPARATION_PATIENCE = 3


@dataclass
class LogisticFit:
    """Maximum-likelihood logistic fit."""

    coefficients: np.ndarray
    converged: bool
    iterations: int
    max_abs_score: float
    deviance: float
    columns: Tuple[str, ...]

    def predict_proba(self, design: DesignMatrix) -> np.ndarray:
        if design.columns != self.columns:
            raise ArgumentError(
                f"design columns {design.columns} do not match fit columns {self.columns}")
        return expit(design.values @ self.coefficients)


def _deviance(eta: np.ndarray, y: np.ndarray) -> float:
    # -2 log-likelihood without overflow: log(1 + e^eta) - y*eta
    return float(2.0 * np.sum(np.logaddexp(0.0, eta) - y * eta))


def logistic_fit(design: DesignMatrix,
                 response,
                 max_iter: int = IRLS_MAX_ITER,
                 score_tol: float = IRLS_SCORE_TOL,
                 deviance_tol: float = IRLS_DEVIANCE_TOL,
                 step_tol: float = IRLS_STEP_TOL,
                 separation_eps: float = SEPARATION_EPS) -> LogisticFit:
    """Fit a binomial-logit model by IRLS.

    Args:
        design: n x p design (n >= p)
        response: 0/1 vector of length n
        max_iter: iteration cap
        score_tol: max |X'(y - p)| accepted as converged
        deviance_tol: relative deviance change accepted as converged
        step_tol: max |coefficient change| required in both cases
        separation_eps: distance from 0/1 at which a probability is pinned

    Returns:
        LogisticFit. A fit that exhausts max_iter without pinned
        probabilities is returned with converged=False.

    Raises:
        ArgumentError: non-binary response or shape mismatch
        SeparationError: fitted probabilities pinned to 0/1 while the
            coefficients are still diverging
        SingularDesignError: singular weighted Gram matrix
    """
    design = _as_design(design)
    X = design.values
    y = np.asarray(response, dtype=float)
    n, p = X.shape

    if y.ndim != 1 or y.shape[0] != n:
        raise ArgumentError(f"response length {y.shape} does not match design rows {n}")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ArgumentError("logistic response must be 0/1")
    if n < p:
        raise ArgumentError(f"design has {n} rows for {p} columns")

    beta = np.zeros(p)
    eta = X @ beta
    deviance = _deviance(eta, y)
    max_abs_score = float('inf')
    converged = False
    iteration = 0
    diverging_steps = 0
    prob = expit(eta)

    for iteration in range(1, max_iter + 1):
        prob = expit(eta)
        weights = np.maximum(prob * (1.0 - prob), _MIN_WEIGHT)
        working = eta + (y - prob) / weights

        new_beta = wls_fit(design, working, weights).coefficients
        step = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta

        eta = X @ beta
        prob = expit(eta)
        new_deviance = _deviance(eta, y)
        deviance_change = abs(new_deviance - deviance) / (abs(new_deviance) + 0.1)
        deviance = new_deviance
        max_abs_score = float(np.max(np.abs(X.T @ (y - prob))))

        pinned = bool(np.any((prob < separation_eps) | (prob > 1.0 - separation_eps)))
        small_score = max_abs_score < score_tol
        stalled = deviance_change < deviance_tol

        logger.debug(f"IRLS iter {iteration}: deviance={deviance:.10g}, "
                     f"score={max_abs_score:.3g}, step={step:.3g}")

        if step < step_tol and (small_score or stalled):
            converged = True
            break

        # a converging fit leaves this state within one Newton step
        if (small_score or stalled) and pinned:
            diverging_steps += 1
        else:
            diverging_steps = 0
        if diverging_steps >= _SEPARATION_PATIENCE:
            raise SeparationError(
                f"fitted probabilities pinned to 0/1 after {iteration} iterations "
                f"(max |coef| {np.max(np.abs(beta)):.1f})")

    if not converged:
        if np.any((prob < separation_eps) | (prob > 1.0 - separation_eps)):
            raise SeparationError(
                f"no convergence in {iteration} iterations with fitted probabilities pinned to 0/1")
        logger.warning(f"IRLS did not converge after {iteration} iterations "
                       f"(max |score| {max_abs_score:.3g})")

    return LogisticFit(
        coefficients=beta,
        converged=converged,
        iterations=iteration,
        max_abs_score=max_abs_score,
        deviance=deviance,
        columns=design.columns,
    )


__all__ = ['LogisticFit', 'logistic_fit']
