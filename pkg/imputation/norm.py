"""
Bayesian linear-regression imputation for DR Impute Sim.

The model is fitted once by least squares on the observed rows of a
selector; each draw then samples the residual variance from its scaled
inverse chi-squared posterior, the coefficients from the conditional
normal, and finally the imputed values with fresh noise. This is the
standard "norm" draw under a noninformative prior.
"""

import logging
from dataclasses import dataclass

import numpy as np

from formula.design import build_design, response_vector, row_selector
from formula.terms import ModelFormula
from numerics.linear import DesignMatrix, LinearFit, wls_fit
from numerics.rng import RngStream, draw
from utils.errors import ArgumentError, InsufficientDataError, SingularDesignError

logger = logging.getLogger(__name__)


@dataclass
class NormModel:
    """A fitted imputation model plus the design of the rows to fill."""

    target: str
    fit: LinearFit
    missing_rows: np.ndarray  # boolean mask over the full dataset
    missing_design: DesignMatrix

    @property
    def n_missing(self) -> int:
        return int(self.missing_rows.sum())

    def draw(self, stream: RngStream) -> np.ndarray:
        """One posterior-predictive draw for the missing rows, in row order."""
        if self.n_missing == 0:
            return np.empty(0)

        fit = self.fit
        dof = fit.degrees_freedom
        p = len(fit.coefficients)

        chi2 = draw(stream, 'chi_squared', df=dof)
        sigma_star = np.sqrt(fit.residual_variance * dof / chi2)

        try:
            root = np.linalg.cholesky(fit.gram_inverse)
        except np.linalg.LinAlgError as e:
            raise SingularDesignError(fit.columns, "imputation Gram inverse not positive definite") from e

        beta_star = fit.coefficients + sigma_star * (root @ draw(stream, 'standard_normal', p))
        noise = draw(stream, 'standard_normal', self.n_missing)
        return self.missing_design.values @ beta_star + sigma_star * noise


def fit_norm_model(observed, target: str, formula: ModelFormula, rows=None) -> NormModel:
    """Fit the imputation model for target on the observed rows of a selector.

    Raises:
        ArgumentError: formula response differs from target
        InsufficientDataError: n_train <= p + 1
        SingularDesignError: rank-deficient training design
        MaskedValueError: a regressor is masked on a used row
    """
    if formula.response != target:
        raise ArgumentError(f"imputation formula {formula} does not model '{target}'")

    selector = row_selector(rows, observed.n)
    missing = observed.missing_mask(target)
    train = selector & ~missing
    to_fill = selector & missing

    n_train = int(train.sum())
    design = build_design(formula, observed, training_rows=train)
    p = design.cols
    if n_train <= p + 1:
        raise InsufficientDataError(
            f"imputation model {formula} has {n_train} training rows for {p} columns")

    fit = wls_fit(design, response_vector(formula, observed, train))
    missing_design = build_design(formula, observed, training_rows=train, eval_rows=to_fill)

    logger.debug(f"norm model {formula}: n_train={n_train}, p={p}, "
                 f"sigma2={fit.residual_variance:.4g}, to fill={int(to_fill.sum())}")

    return NormModel(target=target, fit=fit, missing_rows=to_fill, missing_design=missing_design)


def norm_draw(observed, target: str, formula: ModelFormula, rows,
              stream: RngStream) -> np.ndarray:
    """Impute the masked target entries within a row selector.

    Args:
        observed: dataset with a missing_mask for target
        target: variable to impute; must be the formula's response
        formula: imputation model
        rows: row selector (None for all rows)
        stream: stream for the posterior draw

    Returns:
        Imputed values for the masked rows of the selector, in row order;
        empty when nothing is masked there
    """
    selector = row_selector(rows, observed.n)
    if not (observed.missing_mask(target) & selector).any():
        return np.empty(0)
    return fit_norm_model(observed, target, formula, selector).draw(stream)


__all__ = ['NormModel', 'fit_norm_model', 'norm_draw']
