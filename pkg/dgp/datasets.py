"""
Dataset containers for DR Impute Sim.

CompleteDataset holds everything a replication generates, potential
outcomes included. ObservedDataset is the analyst's view: potential
outcomes are hidden and masked entries read back as NaN. Both expose the
same column()/missing_mask() surface that design construction relies on.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from utils.errors import ArgumentError, MaskedValueError

logger = logging.getLogger(__name__)

DGP_KINDS = ('linear_het', 'linear_hom', 'nonlinear_het', 'multi_1', 'multi_2', 'multi_3')
PRIMARY_KINDS = ('linear_het', 'linear_hom', 'nonlinear_het')
MULTI_KINDS = ('multi_1', 'multi_2', 'multi_3')
MISSING_TARGETS = ('outcome', 'confounder')

EXPOSURE = 'x'
OUTCOME = 'y'


def confounder_name(kind: str) -> str:
    """Name of the confounder that can go missing for a DGP kind."""
    if kind in PRIMARY_KINDS:
        return 'zc'
    if kind in MULTI_KINDS:
        return 'zc1'
    raise ArgumentError(f"Unknown DGP kind '{kind}'. Valid kinds: {', '.join(DGP_KINDS)}")


def covariate_names(kind: str) -> Tuple[str, ...]:
    if kind in PRIMARY_KINDS:
        return ('zc', 'zi', 'zp')
    if kind in MULTI_KINDS:
        return ('zc1', 'zc2')
    raise ArgumentError(f"Unknown DGP kind '{kind}'. Valid kinds: {', '.join(DGP_KINDS)}")


@dataclass
class CompleteDataset:
    """One replication's full data, potential outcomes included."""

    kind: str
    x: np.ndarray
    y: np.ndarray
    y1: np.ndarray
    y0: np.ndarray
    covariates: Dict[str, np.ndarray]
    true_ate: float = 1.0

    def __post_init__(self):
        n = len(self.x)
        arrays = [self.y, self.y1, self.y0, *self.covariates.values()]
        if any(len(a) != n for a in arrays):
            raise ArgumentError("dataset columns have different lengths")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def variables(self) -> List[str]:
        return [EXPOSURE, OUTCOME, *self.covariates]

    def column(self, name: str) -> np.ndarray:
        if name == EXPOSURE:
            return self.x
        if name == OUTCOME:
            return self.y
        if name == 'y1':
            return self.y1
        if name == 'y0':
            return self.y0
        if name in self.covariates:
            return self.covariates[name]
        raise ArgumentError(f"Unknown variable '{name}'. Available: {', '.join(self.variables)}")

    def missing_mask(self, name: str) -> np.ndarray:
        self.column(name)
        return np.zeros(self.n, dtype=bool)


@dataclass
class ObservedDataset:
    """Analyst's view of a CompleteDataset under one missingness mask."""

    base: CompleteDataset
    miss_y: np.ndarray
    miss_conf: np.ndarray
    confounder: str
    target: str
    _cache: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.target not in MISSING_TARGETS:
            raise ArgumentError(
                f"Unknown missing target '{self.target}'. Valid targets: {', '.join(MISSING_TARGETS)}")
        self.miss_y = np.asarray(self.miss_y, dtype=bool)
        self.miss_conf = np.asarray(self.miss_conf, dtype=bool)
        if self.miss_y.shape != (self.n,) or self.miss_conf.shape != (self.n,):
            raise ArgumentError("missingness masks must match the dataset length")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def variables(self) -> List[str]:
        return self.base.variables

    @property
    def target_variable(self) -> str:
        return OUTCOME if self.target == 'outcome' else self.confounder

    def missing_mask(self, name: str) -> np.ndarray:
        if name == OUTCOME:
            return self.miss_y
        if name == self.confounder:
            return self.miss_conf
        self.base.column(name)
        return np.zeros(self.n, dtype=bool)

    def column(self, name: str) -> np.ndarray:
        """Observed values; masked entries are NaN."""
        if name in ('y1', 'y0'):
            raise MaskedValueError(f"potential outcome '{name}' is not observed")
        if name not in self._cache:
            values = np.array(self.base.column(name), dtype=float)
            mask = self.missing_mask(name)
            if mask.any():
                values[mask] = np.nan
            values.setflags(write=False)
            self._cache[name] = values
        return self._cache[name]

    def fully_observed(self) -> np.ndarray:
        """Rows with no masked entry."""
        return ~(self.miss_y | self.miss_conf)


__all__ = [
    'DGP_KINDS',
    'PRIMARY_KINDS',
    'MULTI_KINDS',
    'MISSING_TARGETS',
    'EXPOSURE',
    'OUTCOME',
    'confounder_name',
    'covariate_names',
    'CompleteDataset',
    'ObservedDataset',
]
