"""Data generating processes and missingness mechanisms for DR Impute Sim."""

from dgp.datasets import (
    DGP_KINDS,
    MISSING_TARGETS,
    MULTI_KINDS,
    PRIMARY_KINDS,
    CompleteDataset,
    ObservedDataset,
    confounder_name,
    covariate_names,
)
from dgp.export import write_dataset_csv
from dgp.generators import (
    apply_missingness,
    generate,
    generate_multi,
    generate_primary,
)

__all__ = [
    'DGP_KINDS',
    'MISSING_TARGETS',
    'MULTI_KINDS',
    'PRIMARY_KINDS',
    'CompleteDataset',
    'ObservedDataset',
    'confounder_name',
    'covariate_names',
    'write_dataset_csv',
    'apply_missingness',
    'generate',
    'generate_multi',
    'generate_primary',
]
