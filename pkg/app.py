"""
DR Impute Sim - Command-Line Application

Runs Monte-Carlo grids of doubly robust (AIPW) and IPW effect estimation
under multiple imputation, from a built-in table preset or a custom cell
file, and writes CSV and Markdown reports.

Usage:
    python app.py --preset table1 --reps 500 --seed 20240928 --threads 8 --out results/
    python app.py --cells custom.toml --n 500 --n 2000
"""

import argparse
import logging
import os
import sys
from typing import Iterable, List, Optional

from config.preset_config import get_preset_manager
from config.run_config import RunConfig
from config.settings import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_OUT_DIR,
    DEFAULT_THREADS,
    LOG_FILE_NAME,
    LOG_FORMAT,
    LOG_LEVELS,
    REPORT_FORMATS,
)
from dgp.export import write_dataset_csv
from harness.cells import CellConfig
from harness.grid import GridReport, run_grid
from harness.replication import observed_dataset
from harness.reports import write_reports
from utils.errors import ArgumentError, ConfigError
from utils.file_utils import ensure_directory_exists
from utils.helpers import sanitize_filename

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_INVALID_CELL = 2


# -------------------- Logging Configuration --------------------
def configure_logging(out_dir: str, level: str = DEFAULT_LOG_LEVEL) -> None:
    """Log to stderr and to <out_dir>/run.log, then apply per-component levels."""
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if ensure_directory_exists(out_dir):
        handlers.append(logging.FileHandler(os.path.join(out_dir, LOG_FILE_NAME), mode='a'))

    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, handlers=handlers, force=True)
    for component, component_level in LOG_LEVELS.items():
        logging.getLogger(component).setLevel(component_level)


# -------------------- Argument Parsing --------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='drsim',
        description="Monte-Carlo study of doubly robust estimation with multiple imputation",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--preset', help="built-in table preset (table1 .. table6)")
    source.add_argument('--cells', metavar='FILE', help="custom cell file (.yaml, .yml or .toml)")

    parser.add_argument('--reps', type=int, help="replications per cell (default 500)")
    parser.add_argument('--m', type=int, help="imputations per replication (default 20)")
    parser.add_argument('--n', type=int, action='append', dest='n_list', metavar='N',
                        help="sample size; repeat to run several")
    parser.add_argument('--seed', type=int, help="master seed")
    parser.add_argument('--estimator', choices=('aipw', 'ipw'), help="effect estimator")
    parser.add_argument('--threads', type=int, default=DEFAULT_THREADS,
                        help=f"worker processes (default {DEFAULT_THREADS}, env DRSIM_THREADS)")
    parser.add_argument('--out', default=DEFAULT_OUT_DIR, help="output directory")
    parser.add_argument('--format', action='append', dest='formats', choices=REPORT_FORMATS,
                        help="report format; repeat for several (default: csv and markdown)")
    parser.add_argument('--dump-data', metavar='DIR',
                        help="write the first replication's observed dataset per data scenario")
    parser.add_argument('--log-level', default=DEFAULT_LOG_LEVEL,
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'), type=str.upper)
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        preset=args.preset,
        cells_file=args.cells,
        seed=args.seed,
        reps=args.reps,
        m=args.m,
        n_list=args.n_list,
        estimator=args.estimator,
        threads=args.threads,
        out_dir=args.out,
        dump_data=args.dump_data,
    )
    if args.formats:
        config.formats = tuple(dict.fromkeys(args.formats))
    return config.validate()


# -------------------- Output --------------------
def dump_datasets(cells: Iterable[CellConfig], directory: str) -> List[str]:
    """Write replication 0 of every distinct data scenario to CSV."""
    written = []
    seen = set()
    for cell in cells:
        key = (cell.data_id, cell.seed, cell.force_complete)
        if key in seen:
            continue
        seen.add(key)
        path = os.path.join(directory, f"{sanitize_filename(cell.data_id)}_seed{cell.seed}.csv")
        write_dataset_csv(observed_dataset(cell, 0), path)
        written.append(path)
    logger.info(f"Dumped {len(written)} datasets to {directory}")
    return written


def summary_line(row) -> str:
    cell, summary = row.cell, row.summary
    flag = " INVALID" if summary.invalid else ""
    return (f"{cell.table or '-'} | {cell.panel or cell.missing_target} | n={cell.n} | "
            f"{cell.display_label}: est={summary.est:.3f} mc_se={summary.mc_se:.3f} "
            f"avg_se={summary.avg_se:.3f} cov={summary.coverage:.3f} "
            f"failures={summary.failures}/{summary.reps}{flag}")


def print_report(report: GridReport, stream=None) -> None:
    stream = stream or sys.stdout
    for row in report.rows:
        print(summary_line(row), file=stream)


# -------------------- Main --------------------
def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI.

    Returns:
        0 on success, 1 on configuration errors, 2 when any cell is invalid
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; --help exits 0
        return EXIT_OK if not e.code else EXIT_INVALID_CONFIG
    configure_logging(args.out, args.log_level)

    try:
        config = run_config_from_args(args)
        cells = config.build_cells()
        title = config.report_title()
    except (ConfigError, ArgumentError) as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_CONFIG

    logger.info(f"Resolved {len(cells)} cells ({config.report_name}), threads={config.threads}, "
                f"available presets: {', '.join(get_preset_manager().list_available_presets())}")

    try:
        if config.dump_data:
            dump_datasets(cells, config.dump_data)
        report = run_grid(cells, parallelism=config.threads, title=title)
        write_reports(report, config.out_dir, config.report_name, config.formats)
    except (ConfigError, ArgumentError) as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except Exception as e:
        logger.critical(f"Run aborted: {e}", exc_info=True)
        raise

    print_report(report)
    if report.any_invalid:
        invalid = sum(1 for row in report.rows if row.summary.invalid)
        logger.warning(f"{invalid} cell(s) flagged invalid")
        return EXIT_INVALID_CELL
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
