"""Model formulas and design construction for DR Impute Sim."""

from formula.design import INTERCEPT, build_design, response_vector, row_selector
from formula.terms import (
    IDENTITY,
    SPLINE,
    SQUARE,
    ModelFormula,
    Term,
    parse_formula,
    parse_term,
)

__all__ = [
    'INTERCEPT',
    'build_design',
    'response_vector',
    'row_selector',
    'IDENTITY',
    'SPLINE',
    'SQUARE',
    'ModelFormula',
    'Term',
    'parse_formula',
    'parse_term',
]
