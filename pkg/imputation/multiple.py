"""
Multiple imputation and complete-case selection for DR Impute Sim.

Every cell masks a single variable, so one pass of the univariate
imputation model completes the data; there is no chained-equations loop.
Stratified strategies fit and draw separately within each exposure arm.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from config.settings import MIN_COMPLETE_CASE_ARM_ROWS
from dgp.datasets import EXPOSURE, ObservedDataset
from imputation.norm import NormModel, fit_norm_model
from imputation.strategies import ImputationStrategy
from numerics.rng import RngStream
from utils.errors import ArgumentError, InsufficientDataError

logger = logging.getLogger(__name__)


@dataclass
class CompletedDataset:
    """Fully populated analysis data.

    ``imputed`` records, per variable, which entries were filled in;
    every other entry equals the observed value exactly.
    """

    kind: str
    values: Dict[str, np.ndarray]
    imputed: Dict[str, np.ndarray] = field(default_factory=dict)
    imputation_index: int = 0

    @property
    def n(self) -> int:
        return len(self.values[EXPOSURE])

    @property
    def variables(self) -> List[str]:
        return list(self.values)

    def column(self, name: str) -> np.ndarray:
        if name not in self.values:
            raise ArgumentError(f"Unknown variable '{name}'. Available: {', '.join(self.values)}")
        return self.values[name]

    def missing_mask(self, name: str) -> np.ndarray:
        self.column(name)
        return np.zeros(self.n, dtype=bool)


def _observed_values(observed: ObservedDataset, rows=None) -> Dict[str, np.ndarray]:
    values = {}
    for name in observed.variables:
        column = np.array(observed.column(name), dtype=float)
        values[name] = column if rows is None else column[rows]
    return values


def _fit_models(observed: ObservedDataset, strategy: ImputationStrategy,
                target: str) -> Dict[str, NormModel]:
    formula = strategy.formula_for(target)
    variable = observed.target_variable
    missing = observed.missing_mask(variable)

    if formula.stratify_by_exposure:
        x = observed.column(formula.exposure)
        selectors = {'arm1': x == 1, 'arm0': x == 0}
    else:
        selectors = {'pooled': np.ones(observed.n, dtype=bool)}

    return {
        label: fit_norm_model(observed, variable, formula, rows)
        for label, rows in selectors.items()
        if (missing & rows).any()
    }


def impute_multiple(observed: ObservedDataset, strategy: ImputationStrategy, target: str,
                    m: int, stream: RngStream) -> List[CompletedDataset]:
    """Create m completed datasets.

    Models are fitted once per selector (both exposure arms when the
    strategy is stratified, all rows otherwise); imputation j draws from
    the substream ``imputation/j/<selector>``.

    Args:
        observed: masked data
        strategy: imputation strategy
        target: 'outcome' or 'confounder'; must be the masked target
        m: number of imputations (>= 2)
        stream: imputation stream for this cell and replication

    Returns:
        List of m CompletedDataset, imputation_index 1..m
    """
    if m < 2:
        raise ArgumentError(f"multiple imputation needs m >= 2, got {m}")
    if target != observed.target:
        raise ArgumentError(f"asked to impute the {target} but the {observed.target} is masked")

    variable = observed.target_variable
    models = _fit_models(observed, strategy, target)
    base_values = _observed_values(observed)
    missing = observed.missing_mask(variable)

    completed = []
    for j in range(1, m + 1):
        values = {name: column.copy() for name, column in base_values.items()}
        filled = values[variable]
        for label, model in models.items():
            filled[model.missing_rows] = model.draw(stream.child(f"imputation/{j}/{label}"))
        completed.append(CompletedDataset(
            kind=observed.base.kind,
            values=values,
            imputed={variable: missing.copy()},
            imputation_index=j,
        ))

    logger.debug(f"{strategy.name}: imputed {int(missing.sum())} {variable} values "
                 f"x {m} using {', '.join(models) or 'no'} model(s)")
    return completed


def complete_case(observed: ObservedDataset,
                  min_arm_rows: int = MIN_COMPLETE_CASE_ARM_ROWS) -> CompletedDataset:
    """Keep the fully observed rows.

    Raises:
        InsufficientDataError: fewer than min_arm_rows complete rows in an
            exposure arm
    """
    keep = observed.fully_observed()
    x = observed.column(EXPOSURE)
    for arm in (1, 0):
        count = int((keep & (x == arm)).sum())
        if count < min_arm_rows:
            raise InsufficientDataError(
                f"complete-case arm x={arm} has {count} rows (< {min_arm_rows})")

    return CompletedDataset(
        kind=observed.base.kind,
        values=_observed_values(observed, keep),
        imputation_index=0,
    )


__all__ = ['CompletedDataset', 'impute_multiple', 'complete_case']
