"""
Design matrices and weighted least squares for DR Impute Sim.

Designs are stored row-major as float64 numpy arrays, one row per
observation, with a label per column. Fits use a Householder QR
factorization of the weighted design; the Gram inverse comes from the R
factor.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_triangular

from config.settings import SINGULARITY_TOL
from utils.errors import ArgumentError, InsufficientDataError, SingularDesignError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DesignMatrix:
    """Row-major regressor matrix with column labels."""

    values: np.ndarray
    columns: Tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ArgumentError(f"design must be 2-D, got shape {values.shape}")
        if len(self.columns) != values.shape[1]:
            raise ArgumentError(
                f"{len(self.columns)} column labels for {values.shape[1]} columns")
        if not np.all(np.isfinite(values)):
            raise ArgumentError("design contains non-finite entries")
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'columns', tuple(self.columns))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, columns: Optional[Sequence[str]] = None) -> 'DesignMatrix':
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if columns is None:
            columns = [f"x{j}" for j in range(values.shape[1])]
        return cls(values, tuple(columns))

    def take(self, rows) -> 'DesignMatrix':
        """Row subset (boolean mask or index array)."""
        return DesignMatrix(self.values[rows], self.columns)


@dataclass
class LinearFit:
    """Result of a (weighted) least-squares fit."""

    coefficients: np.ndarray
    residual_variance: float
    gram_inverse: np.ndarray
    degrees_freedom: int
    columns: Tuple[str, ...]
    n_used: int

    def predict(self, design: DesignMatrix) -> np.ndarray:
        if design.columns != self.columns:
            raise ArgumentError(
                f"design columns {design.columns} do not match fit columns {self.columns}")
        return design.values @ self.coefficients


def _as_design(design) -> DesignMatrix:
    return design if isinstance(design, DesignMatrix) else DesignMatrix.from_array(design)


def wls_fit(design: DesignMatrix,
            response,
            weights=None,
            tol: float = SINGULARITY_TOL) -> LinearFit:
    """Weighted least squares by Householder QR.

    Rows with zero weight are dropped before factorizing. The residual
    variance is RSS / (n_used - p), or 0 when there are no spare degrees of
    freedom.

    Args:
        design: n x p design
        response: length-n response vector
        weights: optional non-negative length-n weights
        tol: relative size of |R_jj| below which column j counts as dependent

    Returns:
        LinearFit with coefficients, residual variance, Gram inverse and
        residual degrees of freedom

    Raises:
        ArgumentError: shape mismatch or invalid weights
        InsufficientDataError: fewer positively weighted rows than columns
        SingularDesignError: rank-deficient design, naming the dependent columns
    """
    design = _as_design(design)
    X = design.values
    y = np.asarray(response, dtype=float)
    n, p = X.shape

    if y.ndim != 1 or y.shape[0] != n:
        raise ArgumentError(f"response length {y.shape} does not match design rows {n}")
    if not np.all(np.isfinite(y)):
        raise ArgumentError("response contains non-finite entries")

    if weights is None:
        w = np.ones(n)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,):
            raise ArgumentError(f"weights shape {w.shape} does not match design rows {n}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ArgumentError("weights must be finite and non-negative")

    keep = w > 0
    n_used = int(keep.sum())
    if n_used < p or p == 0:
        raise InsufficientDataError(
            f"{n_used} positively weighted rows for {p} columns ({', '.join(design.columns)})")

    sqrt_w = np.sqrt(w[keep])
    Xw = X[keep] * sqrt_w[:, None]
    yw = y[keep] * sqrt_w

    Q, R = np.linalg.qr(Xw, mode='reduced')
    pivots = np.abs(np.diag(R))
    scale = pivots.max() if pivots.size else 0.0
    dependent = [design.columns[j] for j in range(p) if pivots[j] <= tol * scale]
    if scale == 0.0 or dependent:
        raise SingularDesignError(dependent or list(design.columns))

    coefficients = solve_triangular(R, Q.T @ yw, lower=False)
    R_inv = solve_triangular(R, np.eye(p), lower=False)
    gram_inverse = R_inv @ R_inv.T

    residuals = yw - Xw @ coefficients
    rss = float(residuals @ residuals)
    dof = n_used - p
    residual_variance = rss / dof if dof > 0 else 0.0

    logger.debug(f"wls_fit: n_used={n_used}, p={p}, rss={rss:.6g}")

    return LinearFit(
        coefficients=coefficients,
        residual_variance=residual_variance,
        gram_inverse=gram_inverse,
        degrees_freedom=dof,
        columns=design.columns,
        n_used=n_used,
    )


__all__ = ['DesignMatrix', 'LinearFit', 'wls_fit']
