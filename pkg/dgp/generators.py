"""
Synthetic data generation for DR Impute Sim.

Primary scenarios draw an instrument, a precision variable and one
confounder; multiple-confounder scenarios draw two confounders. The true
average treatment effect is 1 everywhere. Missingness is MAR: the outcome
goes missing depending on the (first) confounder, the confounder depending
on the exposure.
"""

import logging

import numpy as np
from scipy.special import expit

from config.settings import TRUE_ATE
from dgp.datasets import (
    DGP_KINDS,
    MISSING_TARGETS,
    MULTI_KINDS,
    PRIMARY_KINDS,
    CompleteDataset,
    ObservedDataset,
    confounder_name,
)
from numerics.rng import RngStream, draw
from utils.errors import ArgumentError

logger = logging.getLogger(__name__)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ArgumentError(f"sample size must be a positive integer, got {n}")


def exposure_probability_primary(zc: np.ndarray, zi: np.ndarray) -> np.ndarray:
    """P(X = 1 | Z_C, Z_I) with the intercept used by the executable generator."""
    return expit(1.0 - zc + 2.0 * zi)


def exposure_probability_multi(scenario: int, zc1: np.ndarray, zc2: np.ndarray) -> np.ndarray:
    """P(X = 1 | Z_C1, Z_C2); quadratic in Z_C2 for scenarios 1 and 3."""
    if scenario in (1, 3):
        return expit(-(zc1 + zc2 ** 2))
    if scenario == 2:
        return expit(-(zc1 + zc2))
    raise ArgumentError(f"multi-confounder scenario must be 1, 2 or 3, got {scenario}")


def potential_outcomes_primary(kind: str, zc: np.ndarray, zp: np.ndarray, eps: np.ndarray):
    """(Y(1), Y(0)) for a primary scenario with shared noise."""
    if kind == 'linear_het':
        y0 = zc + 2.0 * zp + eps
        y1 = y0 + 0.5 + 0.5 * zc
    elif kind == 'linear_hom':
        y0 = zc + 2.0 * zp + eps
        y1 = y0 + 1.0
    elif kind == 'nonlinear_het':
        y0 = zc + 2.0 * zp ** 2 + eps
        y1 = y0 + 0.5 + 0.5 * zc
    else:
        raise ArgumentError(f"Unknown primary kind '{kind}'. Valid kinds: {', '.join(PRIMARY_KINDS)}")
    return y1, y0


def potential_outcomes_multi(scenario: int, zc1: np.ndarray, zc2: np.ndarray, eps: np.ndarray):
    """(Y(1), Y(0)); quadratic in Z_C2 for scenarios 2 and 3."""
    if scenario == 1:
        y0 = zc1 + zc2 + eps
    elif scenario in (2, 3):
        y0 = zc1 + zc2 ** 2 + eps
    else:
        raise ArgumentError(f"multi-confounder scenario must be 1, 2 or 3, got {scenario}")
    y1 = y0 + 0.5 + 0.5 * zc1
    return y1, y0


def generate_primary(kind: str, n: int, stream: RngStream) -> CompleteDataset:
    """Generate one primary-scenario dataset.

    Args:
        kind: 'linear_het', 'linear_hom' or 'nonlinear_het'
        n: sample size
        stream: data stream for this replication

    Returns:
        CompleteDataset with covariates zc, zi, zp
    """
    if kind not in PRIMARY_KINDS:
        raise ArgumentError(f"Unknown primary kind '{kind}'. Valid kinds: {', '.join(PRIMARY_KINDS)}")
    _check_n(n)

    zp = draw(stream, 'standard_normal', n)
    zi = draw(stream, 'standard_normal', n)
    zc = 1.0 + draw(stream, 'standard_normal', n)
    x = draw(stream, 'bernoulli', p=exposure_probability_primary(zc, zi))
    eps = draw(stream, 'standard_normal', n)

    y1, y0 = potential_outcomes_primary(kind, zc, zp, eps)
    y = np.where(x == 1, y1, y0)

    return CompleteDataset(
        kind=kind,
        x=x.astype(np.int8),
        y=y,
        y1=y1,
        y0=y0,
        covariates={'zc': zc, 'zi': zi, 'zp': zp},
        true_ate=TRUE_ATE,
    )


def generate_multi(scenario: int, n: int, stream: RngStream) -> CompleteDataset:
    """Generate one multiple-confounder dataset.

    Draw order is the same for every scenario, so scenarios sharing an
    exposure law (1 and 3) produce identical exposures from one stream.
    """
    if scenario not in (1, 2, 3):
        raise ArgumentError(f"multi-confounder scenario must be 1, 2 or 3, got {scenario}")
    _check_n(n)

    zc1 = 1.0 + draw(stream, 'standard_normal', n)
    zc2 = 1.0 + draw(stream, 'standard_normal', n)
    x = draw(stream, 'bernoulli', p=exposure_probability_multi(scenario, zc1, zc2))
    eps = draw(stream, 'standard_normal', n)

    y1, y0 = potential_outcomes_multi(scenario, zc1, zc2, eps)
    y = np.where(x == 1, y1, y0)

    return CompleteDataset(
        kind=f"multi_{scenario}",
        x=x.astype(np.int8),
        y=y,
        y1=y1,
        y0=y0,
        covariates={'zc1': zc1, 'zc2': zc2},
        true_ate=TRUE_ATE,
    )


def generate(kind: str, n: int, stream: RngStream) -> CompleteDataset:
    """Dispatch on any DGP kind."""
    if kind in PRIMARY_KINDS:
        return generate_primary(kind, n, stream)
    if kind in MULTI_KINDS:
        return generate_multi(int(kind[-1]), n, stream)
    raise ArgumentError(f"Unknown DGP kind '{kind}'. Valid kinds: {', '.join(DGP_KINDS)}")


def missingness_probability(ds: CompleteDataset, target: str) -> np.ndarray:
    """Per-row probability that the target variable is masked."""
    if target == 'outcome':
        return expit(-0.65 - ds.column(confounder_name(ds.kind)))
    if target == 'confounder':
        return expit(-1.15 - 0.5 * ds.x)
    raise ArgumentError(f"Unknown missing target '{target}'. Valid targets: {', '.join(MISSING_TARGETS)}")


def apply_missingness(ds: CompleteDataset, target: str, stream: RngStream,
                      force_complete: bool = False) -> ObservedDataset:
    """Mask the outcome or the (first) confounder.

    Args:
        ds: complete data (left untouched)
        target: 'outcome' or 'confounder'
        stream: missingness stream for this replication
        force_complete: diagnostic switch; produce an all-observed mask
            without consuming the stream

    Returns:
        ObservedDataset with exactly one active mask
    """
    prob = missingness_probability(ds, target)
    if force_complete:
        mask = np.zeros(ds.n, dtype=bool)
    else:
        mask = draw(stream, 'bernoulli', p=prob).astype(bool)

    empty = np.zeros(ds.n, dtype=bool)
    miss_y, miss_conf = (mask, empty) if target == 'outcome' else (empty, mask)

    logger.debug(f"{ds.kind}: masked {int(mask.sum())}/{ds.n} rows of the {target}")

    return ObservedDataset(
        base=ds,
        miss_y=miss_y,
        miss_conf=miss_conf,
        confounder=confounder_name(ds.kind),
        target=target,
    )


__all__ = [
    'exposure_probability_primary',
    'exposure_probability_multi',
    'potential_outcomes_primary',
    'potential_outcomes_multi',
    'generate_primary',
    'generate_multi',
    'generate',
    'missingness_probability',
    'apply_missingness',
]
