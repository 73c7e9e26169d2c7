"""
Single replication runner for DR Impute Sim.

generate -> mask -> impute m times -> estimate per dataset -> pool.
Data and missingness streams are keyed by the cell's data scenario, so all
strategies of one panel see identical datasets; the imputation stream is
keyed by the full cell identity.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from dgp.datasets import ObservedDataset
from dgp.generators import apply_missingness, generate
from estimators.effects import estimate
from harness.cells import CellConfig
from imputation.multiple import complete_case, impute_multiple
from numerics.rng import RngStream
from pooling.rubin import PooledResult, normal_interval, pool_rubin
from utils.errors import DegenerateCellError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplicationOutcome:
    """Pooled result of one replication, or the reason it failed."""

    rep: int
    result: Optional[PooledResult] = None
    failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None


def data_stream(cell: CellConfig, rep: int) -> RngStream:
    return RngStream(cell.seed, cell.data_id, rep, 'data')


def missingness_stream(cell: CellConfig, rep: int) -> RngStream:
    return RngStream(cell.seed, cell.data_id, rep, 'missingness')


def imputation_stream(cell: CellConfig, rep: int) -> RngStream:
    return RngStream(cell.seed, cell.cell_id, rep, 'imputation')


def observed_dataset(cell: CellConfig, rep: int) -> ObservedDataset:
    """The masked dataset a replication analyses."""
    complete = generate(cell.dgp, cell.n, data_stream(cell, rep))
    return apply_missingness(complete, cell.missing_target, missingness_stream(cell, rep),
                             force_complete=cell.force_complete)


def run_replication(cell: CellConfig, rep_index: int) -> ReplicationOutcome:
    """Run one replication; degenerate fits are recorded, not raised."""
    observed = observed_dataset(cell, rep_index)
    ps_formula, outcome_formula = cell.analysis()

    try:
        if cell.is_complete_case:
            subset = complete_case(observed)
            result = normal_interval(estimate(subset, cell.estimator, ps_formula, outcome_formula))
        else:
            completed = impute_multiple(observed, cell.imputation_strategy(), cell.missing_target,
                                        cell.m, imputation_stream(cell, rep_index))
            estimates = [estimate(data, cell.estimator, ps_formula, outcome_formula)
                         for data in completed]
            result = pool_rubin(estimates)
    except DegenerateCellError as e:
        reason = f"{type(e).__name__}: {e}"
        logger.error(f"Replication {rep_index} of {cell.cell_id} failed: {reason}")
        return ReplicationOutcome(rep=rep_index, failure=reason)

    return ReplicationOutcome(rep=rep_index, result=result)


__all__ = [
    'ReplicationOutcome',
    'data_stream',
    'missingness_stream',
    'imputation_stream',
    'observed_dataset',
    'run_replication',
]
