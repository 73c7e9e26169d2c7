"""
Simulation cell definitions for DR Impute Sim.

A cell is one (DGP, n, missing target, strategy, analysis) combination run
for a number of replications. Formulas are carried as text so cells pickle
cheaply to worker processes.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from config.settings import DEFAULT_M, DEFAULT_REPS, DEFAULT_SEED
from dgp.datasets import DGP_KINDS, MISSING_TARGETS
from estimators.effects import ESTIMATORS
from formula.terms import ModelFormula, parse_formula
from imputation.strategies import (
    ALL_STRATEGIES,
    COMPLETE_CASE,
    ImputationStrategy,
    get_strategy,
)
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

# (propensity formula, outcome formula) per DGP
DEFAULT_ANALYSIS: Dict[str, Tuple[str, str]] = {
    'linear_het': ('x ~ zc', 'y ~ zc + zp'),
    'linear_hom': ('x ~ zc', 'y ~ zc + zp'),
    'nonlinear_het': ('x ~ zc', 'y ~ zc + I(zp^2)'),
    'multi_1': ('x ~ zc1 + I(zc2^2)', 'y ~ zc1 + zc2'),
    'multi_2': ('x ~ zc1 + zc2', 'y ~ zc1 + I(zc2^2)'),
    'multi_3': ('x ~ zc1 + I(zc2^2)', 'y ~ zc1 + I(zc2^2)'),
}


def default_analysis(dgp: str) -> Tuple[str, str]:
    if dgp not in DEFAULT_ANALYSIS:
        raise ConfigError(f"Unknown dgp '{dgp}'. Valid dgps: {', '.join(DGP_KINDS)}")
    return DEFAULT_ANALYSIS[dgp]


@dataclass(frozen=True)
class CellConfig:
    """One simulation cell plus its place in a report."""

    dgp: str
    n: int
    missing_target: str
    strategy: str
    ps_formula: str
    outcome_formula: str
    estimator: str = 'aipw'
    reps: int = DEFAULT_REPS
    m: int = DEFAULT_M
    seed: int = DEFAULT_SEED
    force_complete: bool = False
    table: str = ''
    panel: str = ''
    label: str = ''

    @property
    def data_id(self) -> str:
        """Identity of the generated data; shared by every strategy of a panel."""
        return f"{self.dgp}|n={self.n}|{self.missing_target}"

    @property
    def cell_id(self) -> str:
        return (f"{self.data_id}|{self.strategy}|{self.estimator}"
                f"|ps={self.ps_formula}|outcome={self.outcome_formula}")

    @property
    def is_complete_case(self) -> bool:
        return self.strategy == COMPLETE_CASE

    @property
    def display_label(self) -> str:
        return self.label or self.strategy

    def imputation_strategy(self) -> ImputationStrategy:
        return get_strategy(self.strategy, self.dgp)

    def analysis(self) -> Tuple[ModelFormula, ModelFormula]:
        return parse_formula(self.ps_formula), parse_formula(self.outcome_formula)

    def validate(self) -> 'CellConfig':
        """Check every name and count; returns self for chaining.

        Raises:
            ConfigError: listing the valid choices for the offending field
        """
        if self.dgp not in DGP_KINDS:
            raise ConfigError(f"Unknown dgp '{self.dgp}'. Valid dgps: {', '.join(DGP_KINDS)}")
        if self.missing_target not in MISSING_TARGETS:
            raise ConfigError(f"Unknown missing_target '{self.missing_target}'. "
                              f"Valid targets: {', '.join(MISSING_TARGETS)}")
        if self.strategy not in ALL_STRATEGIES:
            raise ConfigError(f"Unknown strategy '{self.strategy}'. "
                              f"Valid strategies: {', '.join(ALL_STRATEGIES)}")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"Unknown estimator '{self.estimator}'. "
                              f"Valid estimators: {', '.join(ESTIMATORS)}")
        if not self.is_complete_case:
            self.imputation_strategy().formula_for(self.missing_target)
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        if self.reps < 2:
            raise ConfigError(f"reps must be at least 2, got {self.reps}")
        if self.m < 2:
            raise ConfigError(f"m must be at least 2, got {self.m}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

        ps, outcome = self.analysis()
        if ps.response != ps.exposure:
            raise ConfigError(f"propensity formula '{self.ps_formula}' must model the exposure")
        if outcome.response != 'y':
            raise ConfigError(f"outcome formula '{self.outcome_formula}' must model y")
        return self


def make_cell(dgp: str, n: int, missing_target: str, strategy: str,
              ps_formula: Optional[str] = None,
              outcome_formula: Optional[str] = None,
              **kwargs) -> CellConfig:
    """Build and validate a cell, filling in default analysis formulas.

    A strategy that changes the analysis model (precision_linear_everywhere)
    supplies the outcome formula unless one is given explicitly.
    """
    if dgp not in DGP_KINDS:
        raise ConfigError(f"Unknown dgp '{dgp}'. Valid dgps: {', '.join(DGP_KINDS)}")
    default_ps, default_outcome = default_analysis(dgp)

    if outcome_formula is None and strategy in ALL_STRATEGIES and strategy != COMPLETE_CASE:
        override = get_strategy(strategy, dgp).analysis_outcome
        if override is not None:
            outcome_formula = str(override)

    cell = CellConfig(
        dgp=dgp,
        n=int(n),
        missing_target=missing_target,
        strategy=strategy,
        ps_formula=ps_formula or default_ps,
        outcome_formula=outcome_formula or default_outcome,
        **kwargs,
    )
    return cell.validate()


__all__ = ['DEFAULT_ANALYSIS', 'default_analysis', 'CellConfig', 'make_cell']
