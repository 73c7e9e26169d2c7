"""
Report writers for DR Impute Sim.

CSV (one row per cell, fixed six-decimal floats, byte-deterministic) and a
Markdown rendering that follows the panel -> sample size -> row layout of
the published tables.
"""

import csv
import io
import logging
import math
import os
from typing import Dict, List, Optional

from harness.grid import GridReport, GridRow
from utils.file_utils import atomic_write_text
from utils.helpers import format_number

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    'table', 'panel', 'n', 'dgp', 'missing_target', 'strategy', 'reps', 'm',
    'est', 'mc_se', 'avg_se', 'bias', 'rmse', 'coverage', 'failures', 'seed',
    'mc_se_se', 'invalid',
]

MARKDOWN_HEADERS = ["Imputation Model", "Est.", "MC SE", "Avg. SE", "Bias", "RMSE", "95% Cov."]


def csv_row(row: GridRow) -> Dict[str, str]:
    cell, summary = row.cell, row.summary
    return {
        'table': cell.table,
        'panel': cell.panel,
        'n': cell.n,
        'dgp': cell.dgp,
        'missing_target': cell.missing_target,
        'strategy': cell.strategy,
        'reps': cell.reps,
        'm': 1 if cell.is_complete_case else cell.m,
        'est': format_number(summary.est),
        'mc_se': format_number(summary.mc_se),
        'avg_se': format_number(summary.avg_se),
        'bias': format_number(summary.bias),
        'rmse': format_number(summary.rmse),
        'coverage': format_number(summary.coverage),
        'failures': summary.failures,
        'seed': cell.seed,
        'mc_se_se': format_number(summary.mc_se_se),
        'invalid': int(summary.invalid),
    }


def render_csv(report: GridReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow(csv_row(row))
    return buffer.getvalue()


def fmt(val: Optional[float], decimals: int = 2) -> str:
    """Format a metric for display, returning '--' for missing values."""
    if val is None or (isinstance(val, float) and math.isnan(val)):
        return "--"
    text = f"{val:.{decimals}f}"
    return text if float(text) != 0.0 else f"{0.0:.{decimals}f}"


def render_markdown(report: GridReport) -> str:
    """Markdown tables grouped by table, panel and sample size."""
    lines: List[str] = []
    if report.title:
        lines.append(f"# {report.title}")
        lines.append("")
    if not report.rows:
        lines.append("_No cells were run._")
        lines.append("")
        return "\n".join(lines)

    current_table = current_panel = None
    current_n = None
    any_invalid = False
    for row in report.rows:
        cell, summary = row.cell, row.summary
        if cell.table != current_table:
            current_table, current_panel, current_n = cell.table, None, None
            if cell.table and cell.table != report.title:
                lines.append(f"## {cell.table}")
                lines.append("")
        panel = cell.panel or f"{cell.dgp}, missing {cell.missing_target}"
        if panel != current_panel:
            current_panel, current_n = panel, None
            lines.append(f"### {panel}")
            lines.append("")
        if cell.n != current_n:
            current_n = cell.n
            if lines and lines[-1] != "":
                lines.append("")
            lines.append(f"**n = {cell.n}**")
            lines.append("")
            lines.append("| " + " | ".join(MARKDOWN_HEADERS) + " |")
            lines.append("|" + "|".join(["---"] + ["---:"] * (len(MARKDOWN_HEADERS) - 1)) + "|")

        label = cell.display_label
        if summary.invalid:
            label += " †"
            any_invalid = True
        values = [summary.est, summary.mc_se, summary.avg_se, summary.bias,
                  summary.rmse, summary.coverage]
        lines.append("| " + " | ".join([label] + [fmt(v) for v in values]) + " |")

    lines.append("")
    if any_invalid:
        lines.append("† more than 10% of replications failed; metrics use the successful ones only.")
        lines.append("")
    return "\n".join(lines)


def write_reports(report: GridReport, out_dir: str, name: str, formats) -> List[str]:
    """Write <out_dir>/<name>.csv and/or <name>.md; returns the paths written."""
    written = []
    if 'csv' in formats:
        path = os.path.join(out_dir, f"{name}.csv")
        atomic_write_text(path, render_csv(report))
        written.append(path)
    if 'markdown' in formats:
        path = os.path.join(out_dir, f"{name}.md")
        atomic_write_text(path, render_markdown(report))
        written.append(path)
    for path in written:
        logger.info(f"Wrote report {path}")
    return written


__all__ = ['CSV_FIELDS', 'csv_row', 'render_csv', 'fmt', 'render_markdown', 'write_reports']
