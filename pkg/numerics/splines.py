"""
Natural cubic spline basis for DR Impute Sim.

Truncated-power construction of the natural cubic spline: boundary knots at
the training min/max, df - 1 internal knots at equally spaced training
quantiles, cubic between knots and linear beyond the boundary. The constant
function is left out of the basis; designs supply their own intercept.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.settings import DEFAULT_SPLINE_DF
from numerics.linear import DesignMatrix
from utils.errors import ArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplineKnots:
    """Knot placement derived from one training vector."""

    lower: float
    upper: float
    knots: Tuple[float, ...]  # on the unit scale, including both boundaries

    @property
    def df(self) -> int:
        return len(self.knots) - 1

    def basis(self, values) -> np.ndarray:
        """Evaluate the df basis columns at values."""
        x = np.asarray(values, dtype=float)
        u = (x - self.lower) / (self.upper - self.lower)
        xi = np.asarray(self.knots)
        last = xi[-1]

        def d(k: int) -> np.ndarray:
            return (np.maximum(u - xi[k], 0.0) ** 3
                    - np.maximum(u - last, 0.0) ** 3) / (last - xi[k])

        columns = [u]
        if self.df > 1:
            d_last = d(len(xi) - 2)
            columns.extend(d(k) - d_last for k in range(len(xi) - 2))
        return np.column_stack(columns)


def spline_knots(train_values, df: int) -> SplineKnots:
    """Place boundary and internal knots from training values.

    Raises:
        ArgumentError: df < 1, non-finite values, too few distinct training
            values, or coincident internal knots
    """
    if df < 1:
        raise ArgumentError(f"spline df must be >= 1, got {df}")
    train = np.asarray(train_values, dtype=float)
    if train.ndim != 1 or not np.all(np.isfinite(train)):
        raise ArgumentError("spline training values must be a finite 1-D vector")

    distinct = np.unique(train).size
    if distinct < df + 2:
        raise ArgumentError(
            f"natural spline with df={df} needs at least {df + 2} distinct training values, "
            f"got {distinct}")

    lower, upper = float(train.min()), float(train.max())
    internal = np.quantile(train, np.arange(1, df) / df)
    unit = np.concatenate(([0.0], (internal - lower) / (upper - lower), [1.0]))
    if np.any(np.diff(unit) <= 0.0):
        raise ArgumentError(f"spline knots are not distinct for df={df}: {unit.tolist()}")

    return SplineKnots(lower=lower, upper=upper, knots=tuple(unit.tolist()))


def natural_spline_basis(train_values, eval_values, df: int = DEFAULT_SPLINE_DF,
                         name: str = "x") -> DesignMatrix:
    """Natural cubic spline basis trained on one vector, evaluated on another.

    Args:
        train_values: values the knots are placed on
        eval_values: values at which the basis is evaluated
        df: number of basis columns
        name: variable name used in the column labels

    Returns:
        len(eval_values) x df DesignMatrix labelled ns(name,df)[j]
    """
    knots = spline_knots(train_values, df)
    values = knots.basis(eval_values)
    logger.debug(f"ns({name},{df}) knots on [{knots.lower:.4g}, {knots.upper:.4g}]: {knots.knots}")
    return DesignMatrix(values, tuple(f"ns({name},{df})[{j}]" for j in range(1, df + 1)))


__all__ = ['SplineKnots', 'spline_knots', 'natural_spline_basis']
