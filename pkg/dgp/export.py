"""
Dataset dump for DR Impute Sim.

Writes an observed dataset to CSV for debugging. Masked entries are
written as empty cells; potential outcomes are never written.
"""

import csv
import io
import logging

from dgp.datasets import EXPOSURE, OUTCOME, ObservedDataset, covariate_names
from utils.file_utils import atomic_write_text
from utils.helpers import format_number

logger = logging.getLogger(__name__)


def dataset_fieldnames(observed: ObservedDataset) -> list:
    return [EXPOSURE, OUTCOME, *covariate_names(observed.base.kind), 'miss_y', 'miss_conf']


def write_dataset_csv(observed: ObservedDataset, path: str) -> None:
    """Write x, y, covariates and both masks, one row per observation."""
    fieldnames = dataset_fieldnames(observed)
    value_names = fieldnames[:-2]
    columns = {name: observed.column(name) for name in value_names}

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for i in range(observed.n):
        row = {name: format_number(float(columns[name][i]), 10) for name in value_names}
        row[EXPOSURE] = int(columns[EXPOSURE][i])
        row['miss_y'] = int(observed.miss_y[i])
        row['miss_conf'] = int(observed.miss_conf[i])
        writer.writerow(row)

    atomic_write_text(path, buffer.getvalue())
    logger.info(f"Wrote {observed.n} rows of {observed.base.kind} data to {path}")


__all__ = ['dataset_fieldnames', 'write_dataset_csv']
