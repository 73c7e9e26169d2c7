"""
Cell metrics for DR Impute Sim.

Aggregates replication outcomes into the table columns: mean estimate,
Monte-Carlo SE, average model SE, bias, RMSE and CI coverage. Outcomes are
sorted by replication index first, so completion order never changes a
bit of the output.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from config.settings import MAX_FAILURE_FRACTION, TRUE_ATE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellSummary:
    """Aggregated metrics over the successful replications of a cell."""

    est: float
    mc_se: float
    avg_se: float
    bias: float
    rmse: float
    coverage: float
    failures: int
    reps: int
    mc_se_se: float
    invalid: bool

    @property
    def successes(self) -> int:
        return self.reps - self.failures


def summarize_outcomes(outcomes: Iterable, reps: int,
                       true_value: float = TRUE_ATE,
                       max_failure_fraction: float = MAX_FAILURE_FRACTION) -> CellSummary:
    """Compute CellSummary from ReplicationOutcome objects.

    Args:
        outcomes: one outcome per replication, any order
        reps: replications attempted
        true_value: the true effect
        max_failure_fraction: failure share above which the cell is invalid

    Returns:
        CellSummary; metrics are NaN when too few replications succeeded
    """
    ordered = sorted(outcomes, key=lambda o: o.rep)
    results = [o.result for o in ordered if o.ok]
    failures = len(ordered) - len(results)
    invalid = failures > max_failure_fraction * reps

    nan = float('nan')
    if not results:
        return CellSummary(nan, nan, nan, nan, nan, nan, failures, reps, nan, True)

    estimates = np.array([r.delta_bar for r in results])
    ses = np.array([r.se for r in results])
    covered = np.array([r.covers(true_value) for r in results])

    est = float(np.mean(estimates))
    k = estimates.size
    mc_se = float(np.std(estimates, ddof=1)) if k > 1 else nan
    mc_se_se = mc_se / math.sqrt(2.0 * (k - 1)) if k > 1 else nan

    return CellSummary(
        est=est,
        mc_se=mc_se,
        avg_se=float(np.mean(ses)),
        bias=est - true_value,
        rmse=float(np.sqrt(np.mean((estimates - true_value) ** 2))),
        coverage=float(np.mean(covered)),
        failures=failures,
        reps=reps,
        mc_se_se=mc_se_se,
        invalid=invalid,
    )


__all__ = ['CellSummary', 'summarize_outcomes']
