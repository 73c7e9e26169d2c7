"""
Exception types for DR Impute Sim.

Replication-level failures derive from DegenerateCellError so the harness
can record and exclude them; everything else propagates.
"""

from typing import Sequence


class ArgumentError(ValueError):
    """Invalid argument: dimension mismatch or violated precondition."""


class ConfigError(ValueError):
    """Invalid name or value in a run configuration or cells file."""


class DegenerateCellError(RuntimeError):
    """A replication cannot be completed on this dataset."""


class SingularDesignError(DegenerateCellError):
    """Design matrix is rank deficient."""

    def __init__(self, columns: Sequence[str], message: str = ""):
        self.columns = list(columns)
        detail = message or "rank-deficient design"
        super().__init__(f"{detail}; dependent columns: {', '.join(self.columns)}")


class SeparationError(DegenerateCellError):
    """Logistic fit hit complete or quasi-complete separation."""


class InsufficientDataError(DegenerateCellError):
    """Too few usable rows for the requested fit."""


class MaskedValueError(RuntimeError):
    """A masked (missing) value would have been read by a model."""


__all__ = [
    'ArgumentError',
    'ConfigError',
    'DegenerateCellError',
    'SingularDesignError',
    'SeparationError',
    'InsufficientDataError',
    'MaskedValueError',
]
