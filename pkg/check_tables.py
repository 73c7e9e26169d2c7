#!/usr/bin/env python3
"""
Spot-check of simulated tables against published reference values.

Runs the n = 2000 cells below with the preset analysis models and compares
each metric to the reference value with a tolerance. Exits non-zero if any
check misses without a documented deviation (see DESIGN.md). Takes minutes
per table at the default 500 replications.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from config.preset_config import build_preset_cells
from config.settings import DEFAULT_M, DEFAULT_REPS, DEFAULT_SEED, DEFAULT_THREADS, LOG_FORMAT
from harness.aggregate import CellSummary
from harness.cells import CellConfig
from harness.grid import run_grid

logger = logging.getLogger(__name__)

SPOT_CHECK_N = 2000


@dataclass(frozen=True)
class SpotCheck:
    """One reference metric of one table cell.

    `upper_only` checks value <= expected + tolerance instead of a band.
    A non-empty `deviation` names a known cause for missing the reference;
    such a miss is reported but not counted.
    """

    preset: str
    missing_target: str
    strategy: str
    metric: str
    expected: float
    tolerance: float
    upper_only: bool = False
    deviation: str = ''

    def passes(self, value: float) -> bool:
        if self.upper_only:
            return value <= self.expected + self.tolerance
        return abs(value - self.expected) <= self.tolerance

    def describe(self) -> str:
        bound = f"<= {self.expected + self.tolerance:.2f}" if self.upper_only \
            else f"{self.expected:.2f} +/- {self.tolerance:.2f}"
        return f"{self.preset} {self.missing_target:<10} {self.strategy:<22} {self.metric:<8} {bound}"


REFERENCE_CHECKS: List[SpotCheck] = [
    SpotCheck('table1', 'confounder', 'correct', 'est', 0.99, 0.02),
    SpotCheck('table1', 'confounder', 'correct', 'coverage', 0.93, 0.04),
    SpotCheck('table1', 'confounder', 'omit_precision', 'est', 0.92, 0.02),
    SpotCheck('table1', 'confounder', 'omit_exposure', 'est', 0.80, 0.02,
              deviation="pooled model keeps zi, which stands in for the dropped exposure"),
    SpotCheck('table1', 'confounder', 'omit_exposure', 'coverage', 0.02, 0.08, upper_only=True),
    SpotCheck('table1', 'confounder', 'omit_outcome', 'est', 0.86, 0.02),
    SpotCheck('table1', 'outcome', 'complete_case', 'est', 1.08, 0.02),
    SpotCheck('table1', 'outcome', 'complete_case', 'coverage', 0.64, 0.11, upper_only=True),
    SpotCheck('table1', 'outcome', 'omit_precision', 'est', 1.00, 0.03),
    SpotCheck('table1', 'outcome', 'omit_precision', 'mc_se', 0.08, 0.02),
    SpotCheck('table1', 'outcome', 'correct', 'mc_se', 0.05, 0.01),
    SpotCheck('table1', 'outcome', 'missing_interaction', 'est', 1.08, 0.02),
    SpotCheck('table2', 'outcome', 'missing_interaction', 'est', 1.00, 0.02),
    SpotCheck('table2', 'outcome', 'missing_interaction', 'coverage', 0.95, 0.04),
    SpotCheck('table3', 'confounder', 'correct', 'est', 1.00, 0.02),
    SpotCheck('table3', 'confounder', 'misspec_precision', 'est', 0.81, 0.03,
              deviation="augmented-contribution AIPW is less sensitive to the linear zp fit"),
    SpotCheck('table5', 'confounder', 'misspec_zc2_linear', 'est', 0.32, 0.10,
              deviation="augmented-contribution AIPW is less sensitive to the linear zc2 fit"),
    SpotCheck('table5', 'confounder', 'oversaturated', 'est', 0.98, 0.05),
]


def spot_check_cells(checks: List[SpotCheck], reps: int, m: int, seed: int) -> List[CellConfig]:
    """The preset cells the checks refer to, each once, in preset order."""
    wanted = {(c.preset, c.missing_target, c.strategy) for c in checks}
    cells = []
    for preset in sorted({c.preset for c in checks}):
        for cell in build_preset_cells(preset, reps=reps, m=m, seed=seed, n_list=[SPOT_CHECK_N]):
            if (cell.table, cell.missing_target, cell.strategy) in wanted:
                cells.append(cell)
    return cells


def evaluate(checks: List[SpotCheck],
             summaries: Dict[Tuple[str, str, str], CellSummary]) -> Tuple[int, int]:
    """Print observed vs reference values.

    Returns:
        (misses, documented deviations); a cell that was not run or is
        invalid always counts as a miss
    """
    misses = 0
    deviations = 0
    print(f"\n📊 Reference checks at n = {SPOT_CHECK_N}:")
    print("-" * 80)
    for check in checks:
        summary: Optional[CellSummary] = summaries.get((check.preset, check.missing_target, check.strategy))
        if summary is None:
            print(f"  ❓ {check.describe()}  (cell not run)")
            misses += 1
            continue
        value = getattr(summary, check.metric)
        if summary.invalid:
            misses += 1
            print(f"  ❌ {check.describe()}  observed {value:.3f} (invalid cell)")
        elif check.passes(value):
            print(f"  ✅ {check.describe()}  observed {value:.3f}")
        elif check.deviation:
            deviations += 1
            print(f"  ⚠️  {check.describe()}  observed {value:.3f} (documented deviation: {check.deviation})")
        else:
            misses += 1
            print(f"  ❌ {check.describe()}  observed {value:.3f}")
    return misses, deviations


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Compare simulated cells with reference table values")
    parser.add_argument('--reps', type=int, default=DEFAULT_REPS)
    parser.add_argument('--m', type=int, default=DEFAULT_M)
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--threads', type=int, default=DEFAULT_THREADS)
    parser.add_argument('--preset', action='append', help="restrict to these presets")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)

    checks = [c for c in REFERENCE_CHECKS if not args.preset or c.preset in args.preset]
    cells = spot_check_cells(checks, args.reps, args.m, args.seed)
    report = run_grid(cells, parallelism=args.threads, title="reference spot-check")
    summaries = {(row.cell.table, row.cell.missing_target, row.cell.strategy): row.summary
                 for row in report.rows}

    misses, deviations = evaluate(checks, summaries)
    print("-" * 80)
    if deviations:
        print(f"  ⚠️  {deviations} documented deviation(s), see DESIGN.md")
    if misses:
        print(f"  ⚠️  {misses}/{len(checks)} checks missed")
        return 1
    print(f"  ✅ {len(checks) - deviations}/{len(checks)} checks passed, no unexplained misses")
    return 0


if __name__ == '__main__':
    sys.exit(main())
