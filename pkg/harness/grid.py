"""
Cell and grid execution for DR Impute Sim.

Replications of a cell run in a process pool (or inline when parallelism
is 1). Results are collected in replication order, so a run is
bit-identical for any worker count.
"""

import logging
import sys
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Iterator, List, Optional, Sequence

from config.settings import CELL_SLOW_THRESHOLD, FEATURES
from harness.aggregate import CellSummary, summarize_outcomes
from harness.cells import CellConfig
from harness.replication import ReplicationOutcome, run_replication
from utils.errors import ArgumentError
from utils.performance_monitor import performance_monitor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridRow:
    cell: CellConfig
    summary: CellSummary


@dataclass
class GridReport:
    """Ordered cell results of one run."""

    title: str = ''
    rows: List[GridRow] = field(default_factory=list)

    @property
    def any_invalid(self) -> bool:
        return any(row.summary.invalid for row in self.rows)


def _with_progress(results: Iterable[ReplicationOutcome], total: int,
                   desc: str, enabled: bool) -> Iterator[ReplicationOutcome]:
    if enabled:
        try:
            from tqdm import tqdm
            yield from tqdm(results, total=total, desc=desc, unit="rep",
                            file=sys.stderr, ncols=80, leave=False)
            return
        except ImportError:
            logger.debug("tqdm not available, falling back to logging progress")

    step = max(1, total // 10)
    for done, outcome in enumerate(results, start=1):
        if done % step == 0 or done == total:
            logger.debug(f"{desc}: {done}/{total} replications ({done / total * 100:.0f}%)")
        yield outcome


def run_cell_outcomes(cell: CellConfig, parallelism: int = 1,
                      executor: Optional[Executor] = None,
                      progress: Optional[bool] = None) -> List[ReplicationOutcome]:
    """All replication outcomes of a cell, in replication order."""
    if cell.reps < 2:
        raise ArgumentError(f"a cell needs at least 2 replications, got {cell.reps}")
    if parallelism < 1:
        raise ArgumentError(f"parallelism must be >= 1, got {parallelism}")
    if progress is None:
        progress = FEATURES['progress_bars']

    worker = partial(run_replication, cell)
    indices = range(cell.reps)
    desc = f"{cell.dgp} n={cell.n} {cell.missing_target} {cell.strategy}"

    if executor is None and parallelism == 1:
        return list(_with_progress(map(worker, indices), cell.reps, desc, progress))

    owned = executor is None
    pool = executor or ProcessPoolExecutor(max_workers=parallelism)
    try:
        chunksize = max(1, cell.reps // (parallelism * 4))
        results = pool.map(worker, indices, chunksize=chunksize)
        return list(_with_progress(results, cell.reps, desc, progress))
    finally:
        if owned:
            pool.shutdown()


def run_cell(cell: CellConfig, parallelism: int = 1,
             executor: Optional[Executor] = None,
             progress: Optional[bool] = None) -> CellSummary:
    """Run every replication of a cell and aggregate the metrics.

    Args:
        cell: validated cell
        parallelism: worker processes (1 runs inline)
        executor: optional shared pool, reused across cells by run_grid
        progress: show a progress bar (defaults to FEATURES['progress_bars'])

    Returns:
        CellSummary; cells with more than the allowed share of failed
        replications are flagged invalid
    """
    logger.info(f"Running cell {cell.cell_id} (reps={cell.reps}, m={cell.m})")

    with performance_monitor(f"cell {cell.cell_id}", CELL_SLOW_THRESHOLD,
                             track_memory=FEATURES['log_cell_resources']) as metrics:
        outcomes = run_cell_outcomes(cell, parallelism, executor, progress)
        summary = summarize_outcomes(outcomes, cell.reps)

    if summary.invalid:
        logger.warning(f"Cell {cell.cell_id} flagged invalid: "
                       f"{summary.failures}/{cell.reps} replications failed")
    logger.info(f"Finished cell {cell.cell_id} in {metrics['duration']:.1f}s: "
                f"est={summary.est:.4f}, coverage={summary.coverage:.3f}, "
                f"failures={summary.failures}")
    return summary


def run_grid(cells: Sequence[CellConfig], parallelism: int = 1, title: str = '',
             progress: Optional[bool] = None) -> GridReport:
    """Run cells sequentially, sharing one worker pool, in the given order."""
    report = GridReport(title=title)
    if not cells:
        logger.info("Empty grid; nothing to run")
        return report

    logger.info(f"Running grid '{title or 'custom'}': {len(cells)} cells, parallelism={parallelism}")
    executor = ProcessPoolExecutor(max_workers=parallelism) if parallelism > 1 else None
    try:
        for cell in cells:
            summary = run_cell(cell, parallelism, executor, progress)
            report.rows.append(GridRow(cell=cell, summary=summary))
    finally:
        if executor is not None:
            executor.shutdown()
    return report


__all__ = ['GridRow', 'GridReport', 'run_cell_outcomes', 'run_cell', 'run_grid']
