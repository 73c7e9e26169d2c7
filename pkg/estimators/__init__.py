"""Propensity, outcome and treatment-effect estimators for DR Impute Sim."""

from estimators.effects import (
    ESTIMATORS,
    EstimateWithVariance,
    aipw_estimate,
    aipw_from_components,
    estimate,
    ipw_estimate,
    ipw_from_components,
)
from estimators.outcome import ArmPredictions, fit_outcome_by_arm
from estimators.propensity import PropensityScores, clip_propensity, fit_propensity

__all__ = [
    'ESTIMATORS',
    'EstimateWithVariance',
    'aipw_estimate',
    'aipw_from_components',
    'estimate',
    'ipw_estimate',
    'ipw_from_components',
    'ArmPredictions',
    'fit_outcome_by_arm',
    'PropensityScores',
    'clip_propensity',
    'fit_propensity',
]
