"""Numerical core for DR Impute Sim: solvers, splines and random streams."""

from numerics.linear import DesignMatrix, LinearFit, wls_fit
from numerics.logistic import LogisticFit, logistic_fit
from numerics.rng import RngStream, draw
from numerics.splines import SplineKnots, natural_spline_basis, spline_knots

__all__ = [
    'DesignMatrix',
    'LinearFit',
    'wls_fit',
    'LogisticFit',
    'logistic_fit',
    'RngStream',
    'draw',
    'SplineKnots',
    'natural_spline_basis',
    'spline_knots',
]
