"""Stochastic regression imputation for DR Impute Sim."""

from imputation.multiple import CompletedDataset, complete_case, impute_multiple
from imputation.norm import NormModel, fit_norm_model, norm_draw
from imputation.strategies import (
    ALL_STRATEGIES,
    COMPLETE_CASE,
    STRATEGY_NAMES,
    ImputationStrategy,
    dgp_family,
    get_strategy,
)

__all__ = [
    'CompletedDataset',
    'complete_case',
    'impute_multiple',
    'NormModel',
    'fit_norm_model',
    'norm_draw',
    'ALL_STRATEGIES',
    'COMPLETE_CASE',
    'STRATEGY_NAMES',
    'ImputationStrategy',
    'dgp_family',
    'get_strategy',
]
