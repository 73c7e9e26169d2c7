"""Monte-Carlo simulation harness for DR Impute Sim."""

from harness.aggregate import CellSummary, summarize_outcomes
from harness.cells import DEFAULT_ANALYSIS, CellConfig, default_analysis, make_cell
from harness.grid import GridReport, GridRow, run_cell, run_cell_outcomes, run_grid
from harness.replication import ReplicationOutcome, observed_dataset, run_replication
from harness.reports import CSV_FIELDS, render_csv, render_markdown, write_reports

__all__ = [
    'CellSummary',
    'summarize_outcomes',
    'DEFAULT_ANALYSIS',
    'CellConfig',
    'default_analysis',
    'make_cell',
    'GridReport',
    'GridRow',
    'run_cell',
    'run_cell_outcomes',
    'run_grid',
    'ReplicationOutcome',
    'observed_dataset',
    'run_replication',
    'CSV_FIELDS',
    'render_csv',
    'render_markdown',
    'write_reports',
]
