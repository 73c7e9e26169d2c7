"""
Rubin's rules for DR Impute Sim.

Combines per-imputation estimates into a pooled estimate with total
variance T = U_bar + (1 + 1/m) B, and builds a t interval on Rubin's
classical degrees of freedom. When the between-imputation variance is
exactly zero the interval falls back to the normal quantile.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from config.settings import DEFAULT_CONFIDENCE
from estimators.effects import EstimateWithVariance
from utils.errors import ArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PooledResult:
    """Pooled estimate, variance components and confidence interval."""

    delta_bar: float
    u_bar: float
    b: float
    t: float
    m: int
    dof: float
    ci_low: float
    ci_high: float

    @property
    def se(self) -> float:
        return math.sqrt(self.t)

    def covers(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def _check_confidence(confidence: float) -> None:
    if not 0.0 < confidence < 1.0:
        raise ArgumentError(f"confidence must lie in (0, 1), got {confidence}")


def rubin_dof(m: int, u_bar: float, b: float) -> float:
    """Classical degrees of freedom (m - 1)(1 + U_bar / ((1 + 1/m) B))^2."""
    if b == 0.0:
        return math.inf
    return (m - 1) * (1.0 + u_bar / ((1.0 + 1.0 / m) * b)) ** 2


def pool_rubin(estimates: Sequence[EstimateWithVariance],
               confidence: float = DEFAULT_CONFIDENCE) -> PooledResult:
    """Pool m >= 2 estimates.

    Args:
        estimates: per-imputation estimates
        confidence: interval coverage

    Returns:
        PooledResult

    Raises:
        ArgumentError: fewer than two estimates or non-finite inputs
    """
    _check_confidence(confidence)
    m = len(estimates)
    if m < 2:
        raise ArgumentError(f"Rubin's rules need m >= 2 estimates, got {m}")

    deltas = np.array([e.delta_hat for e in estimates], dtype=float)
    variances = np.array([e.within_variance for e in estimates], dtype=float)
    if not (np.all(np.isfinite(deltas)) and np.all(np.isfinite(variances))):
        raise ArgumentError("pooled estimates and variances must be finite")

    u_bar = float(np.mean(variances))
    # identical estimates give B = 0 and the common value exactly, not rounding noise
    if np.ptp(deltas) == 0.0:
        delta_bar, b = float(deltas[0]), 0.0
    else:
        delta_bar, b = float(np.mean(deltas)), float(np.var(deltas, ddof=1))
    t = u_bar + (1.0 + 1.0 / m) * b
    dof = rubin_dof(m, u_bar, b)

    tail = 0.5 + confidence / 2.0
    quantile = stats.norm.ppf(tail) if math.isinf(dof) else stats.t.ppf(tail, dof)
    half_width = float(quantile) * math.sqrt(t)

    return PooledResult(
        delta_bar=delta_bar,
        u_bar=u_bar,
        b=b,
        t=t,
        m=m,
        dof=dof,
        ci_low=delta_bar - half_width,
        ci_high=delta_bar + half_width,
    )


def normal_interval(estimate: EstimateWithVariance,
                    confidence: float = DEFAULT_CONFIDENCE) -> PooledResult:
    """Single-dataset result with a normal-quantile interval."""
    _check_confidence(confidence)
    half_width = float(stats.norm.ppf(0.5 + confidence / 2.0)) * math.sqrt(estimate.within_variance)
    return PooledResult(
        delta_bar=estimate.delta_hat,
        u_bar=estimate.within_variance,
        b=0.0,
        t=estimate.within_variance,
        m=1,
        dof=math.inf,
        ci_low=estimate.delta_hat - half_width,
        ci_high=estimate.delta_hat + half_width,
    )


__all__ = ['PooledResult', 'rubin_dof', 'pool_rubin', 'normal_interval']
