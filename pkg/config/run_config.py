"""
Run configuration for DR Impute Sim.

Resolves what a command-line invocation should run: a built-in table preset
or a custom cell file (YAML or TOML), with flag values taking precedence
over file values, and file values over the defaults in config.settings.

Custom cell file schema (YAML shown; TOML uses the same keys with
`[defaults]` and `[[cells]]` tables):

    title: "My grid"
    defaults: {reps: 200, m: 10, seed: 7, estimator: aipw}
    cells:
      - {dgp: linear_het, n: [500, 2000], missing_target: confounder,
         strategy: correct, label: "Correct"}
      - {dgp: linear_het, n: 500, missing_target: outcome,
         strategy: complete_case, outcome: "y ~ zc + zp"}
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from config.preset_config import get_preset_manager
from config.settings import (
    DEFAULT_FORMATS,
    DEFAULT_M,
    DEFAULT_OUT_DIR,
    DEFAULT_REPS,
    DEFAULT_SEED,
    DEFAULT_THREADS,
    REPORT_FORMATS,
)
from harness.cells import CellConfig, make_cell
from utils.errors import ConfigError
from utils.helpers import sanitize_filename

logger = logging.getLogger(__name__)

CELL_KEYS = {
    'dgp', 'n', 'missing_target', 'strategy', 'ps', 'outcome', 'estimator',
    'reps', 'm', 'seed', 'table', 'panel', 'label', 'force_complete',
}
DEFAULT_KEYS = {'reps', 'm', 'seed', 'estimator'}


def load_cell_file(path: str) -> Dict[str, Any]:
    """Parse a YAML or TOML cell file into a mapping.

    Raises:
        ConfigError: unreadable file, unknown extension or malformed content
    """
    ext = os.path.splitext(path)[1].lower()
    try:
        if ext in ('.yaml', '.yml'):
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        elif ext == '.toml':
            with open(path, 'rb') as f:
                data = tomllib.load(f)
        else:
            raise ConfigError(f"Unsupported cell file '{path}'; use .yaml, .yml or .toml")
    except OSError as e:
        raise ConfigError(f"Cannot read cell file '{path}': {e}") from e
    except (yaml.YAMLError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"Malformed cell file '{path}': {e}") from e

    if isinstance(data, list):
        data = {'cells': data}
    if not isinstance(data, dict) or not isinstance(data.get('cells'), list):
        raise ConfigError(f"Cell file '{path}' must contain a 'cells' list")
    return data


def _as_int_list(value: Any, key: str) -> List[int]:
    values = value if isinstance(value, (list, tuple)) else [value]
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"'{key}' must be an integer or a list of integers, got {value!r}") from e


@dataclass
class RunConfig:
    """Resolved settings of one command-line run."""

    preset: Optional[str] = None
    cells_file: Optional[str] = None
    seed: Optional[int] = None
    reps: Optional[int] = None
    m: Optional[int] = None
    n_list: Optional[Sequence[int]] = None
    estimator: Optional[str] = None
    threads: int = DEFAULT_THREADS
    out_dir: str = DEFAULT_OUT_DIR
    formats: Tuple[str, ...] = DEFAULT_FORMATS
    dump_data: Optional[str] = None
    title: str = ''
    _file_data: Dict[str, Any] = field(default_factory=dict, repr=False)

    def validate(self) -> 'RunConfig':
        """Check the flag-level invariants.

        Raises:
            ConfigError: neither or both of preset/cells given, bad counts or formats
        """
        if (self.preset is None) == (self.cells_file is None):
            raise ConfigError("Exactly one of --preset or --cells is required")
        if self.preset is not None:
            presets = get_preset_manager().list_available_presets()
            if self.preset.lower() not in presets:
                raise ConfigError(f"Unknown preset '{self.preset}'. Valid presets: {', '.join(presets)}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        for name, value in (('reps', self.reps), ('m', self.m)):
            if value is not None and value < 2:
                raise ConfigError(f"{name} must be at least 2, got {value}")
        if self.seed is not None and self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.n_list is not None and any(n < 1 for n in self.n_list):
            raise ConfigError(f"sample sizes must be positive, got {list(self.n_list)}")
        unknown = [f for f in self.formats if f not in REPORT_FORMATS]
        if unknown or not self.formats:
            raise ConfigError(f"Unknown report format(s) {unknown}. Valid formats: {', '.join(REPORT_FORMATS)}")
        return self

    @property
    def report_name(self) -> str:
        """File stem for the reports: the preset name or the cell file's stem."""
        if self.preset is not None:
            return self.preset.lower()
        return sanitize_filename(os.path.splitext(os.path.basename(self.cells_file))[0])

    def report_title(self) -> str:
        if self.title:
            return self.title
        if self.preset is not None:
            return get_preset_manager().get_title(self.preset.lower())
        return self._load_file().get('title', self.report_name)

    def _load_file(self) -> Dict[str, Any]:
        if not self._file_data:
            self._file_data = load_cell_file(self.cells_file)
        return self._file_data

    def build_cells(self) -> List[CellConfig]:
        """Expand the preset or cell file into validated cells."""
        self.validate()
        if self.preset is not None:
            return get_preset_manager().build_cells(
                self.preset,
                reps=self.reps if self.reps is not None else DEFAULT_REPS,
                m=self.m if self.m is not None else DEFAULT_M,
                seed=self.seed if self.seed is not None else DEFAULT_SEED,
                n_list=self.n_list,
                estimator=self.estimator,
            )
        return self._custom_cells()

    def _custom_cells(self) -> List[CellConfig]:
        data = self._load_file()
        defaults = data.get('defaults') or {}
        unknown = set(defaults) - DEFAULT_KEYS
        if unknown:
            raise ConfigError(f"Unknown defaults key(s) {sorted(unknown)}. "
                              f"Valid keys: {', '.join(sorted(DEFAULT_KEYS))}")

        def pick(entry: Dict[str, Any], key: str, flag: Any, fallback: Any) -> Any:
            if flag is not None:
                return flag
            if key in entry:
                return entry[key]
            return defaults.get(key, fallback)

        cells = []
        for index, entry in enumerate(data['cells']):
            if not isinstance(entry, dict):
                raise ConfigError(f"cell #{index + 1} must be a mapping, got {entry!r}")
            unknown = set(entry) - CELL_KEYS
            if unknown:
                raise ConfigError(f"cell #{index + 1}: unknown key(s) {sorted(unknown)}. "
                                  f"Valid keys: {', '.join(sorted(CELL_KEYS))}")
            missing = [k for k in ('dgp', 'n', 'missing_target', 'strategy') if k not in entry]
            if missing:
                raise ConfigError(f"cell #{index + 1}: missing key(s) {', '.join(missing)}")

            sizes = list(self.n_list) if self.n_list else _as_int_list(entry['n'], 'n')
            for n in sizes:
                cells.append(make_cell(
                    entry['dgp'], n, entry['missing_target'], entry['strategy'],
                    ps_formula=entry.get('ps'),
                    outcome_formula=entry.get('outcome'),
                    estimator=pick(entry, 'estimator', self.estimator, 'aipw'),
                    reps=int(pick(entry, 'reps', self.reps, DEFAULT_REPS)),
                    m=int(pick(entry, 'm', self.m, DEFAULT_M)),
                    seed=int(pick(entry, 'seed', self.seed, DEFAULT_SEED)),
                    force_complete=bool(entry.get('force_complete', False)),
                    table=str(entry.get('table', '')),
                    panel=str(entry.get('panel', '')),
                    label=str(entry.get('label', '')),
                ))

        logger.info(f"Cell file {self.cells_file}: {len(cells)} cells")
        return cells


__all__ = ['RunConfig', 'load_cell_file', 'CELL_KEYS']
