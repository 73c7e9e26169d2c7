"""
Table preset configuration system for DR Impute Sim.

This module loads the built-in grid presets (one YAML file per published
table) and expands them into ordered simulation cells, so a whole table can
be reproduced with a single `--preset` flag.
"""

import logging
import os
from typing import Any, Dict, List, Optional, Sequence

import yaml

from config.settings import DEFAULT_M, DEFAULT_N_LIST, DEFAULT_REPS, DEFAULT_SEED
from harness.cells import CellConfig, make_cell
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

# Base directory for table presets
PRESET_CONFIG_DIR = os.path.join(os.path.dirname(__file__), '..', 'configs', 'presets')

REQUIRED_KEYS = ('preset', 'dgp', 'panels')


class PresetConfigManager:
    """Manages loading and caching of table presets."""

    def __init__(self, config_dir: Optional[str] = None):
        self._config_dir = os.path.abspath(config_dir or PRESET_CONFIG_DIR)
        self._config_cache: Dict[str, Dict] = {}
        self._load_all_configs()

    def _load_all_configs(self):
        """Load every preset file in the preset directory."""
        if not os.path.exists(self._config_dir):
            logger.warning(f"Preset directory not found: {self._config_dir}")
            return

        logger.debug(f"Loading presets from: {self._config_dir}")

        for filename in sorted(os.listdir(self._config_dir)):
            if not filename.endswith(('.yaml', '.yml')):
                continue
            config_path = os.path.join(self._config_dir, filename)
            try:
                config = self._load_config_file(config_path)
                self._check_schema(config, filename)
            except (OSError, yaml.YAMLError, ConfigError) as e:
                logger.error(f"Failed to load preset {filename}: {e}")
                continue

            name = config['preset'].get('name') or os.path.splitext(filename)[0]
            self._config_cache[name] = config
            logger.debug(f"Loaded preset: {name}")

        logger.debug(f"Loaded {len(self._config_cache)} presets")

    def _load_config_file(self, config_path: str) -> Dict:
        """Load a single YAML preset."""
        with open(config_path, 'r', encoding='utf-8') as file:
            return yaml.safe_load(file) or {}

    @staticmethod
    def _check_schema(config: Dict, source: str):
        missing = [key for key in REQUIRED_KEYS if key not in config]
        if missing:
            raise ConfigError(f"{source}: missing keys {', '.join(missing)}")
        for panel in config['panels']:
            if 'missing_target' not in panel or not panel.get('rows'):
                raise ConfigError(f"{source}: every panel needs missing_target and rows")
            for row in panel['rows']:
                if 'strategy' not in row:
                    raise ConfigError(f"{source}: every row needs a strategy")

    def list_available_presets(self) -> List[str]:
        """Get the names of all loaded presets."""
        return sorted(self._config_cache.keys())

    def get_preset(self, name: str) -> Dict[str, Any]:
        """Get the raw configuration of a preset.

        Raises:
            ConfigError: unknown preset, listing the available ones
        """
        key = name.lower()
        if key not in self._config_cache:
            raise ConfigError(f"Unknown preset '{name}'. "
                              f"Valid presets: {', '.join(self.list_available_presets())}")
        return self._config_cache[key].copy()

    def get_title(self, name: str) -> str:
        return self.get_preset(name)['preset'].get('title', name)

    def build_cells(self, name: str, reps: int = DEFAULT_REPS, m: int = DEFAULT_M,
                    seed: int = DEFAULT_SEED, n_list: Optional[Sequence[int]] = None,
                    estimator: Optional[str] = None) -> List[CellConfig]:
        """Expand a preset into validated cells.

        Cells are ordered panel -> sample size -> row, the layout of the
        published tables.

        Args:
            name: preset name (table1 .. table6)
            reps: replications per cell
            m: imputations per replication
            seed: master seed
            n_list: sample sizes, overriding the preset's list
            estimator: 'aipw' or 'ipw', overriding the default

        Returns:
            List of CellConfig
        """
        config = self.get_preset(name)
        table = config['preset'].get('name', name)
        dgp = config['dgp']
        analysis = config.get('analysis') or {}
        sizes = list(n_list) if n_list else list(config.get('n') or DEFAULT_N_LIST)

        extra: Dict[str, Any] = {}
        if estimator is not None:
            extra['estimator'] = estimator

        cells = []
        for panel in config['panels']:
            target = panel['missing_target']
            label = panel.get('label', target)
            for n in sizes:
                for row in panel['rows']:
                    cells.append(make_cell(
                        dgp, int(n), target, row['strategy'],
                        ps_formula=row.get('ps') or analysis.get('ps'),
                        outcome_formula=row.get('outcome') or analysis.get('outcome'),
                        reps=reps, m=m, seed=seed,
                        table=table, panel=label, label=row.get('label', row['strategy']),
                        **extra,
                    ))

        logger.info(f"Preset {table}: {len(cells)} cells over n={sizes}")
        return cells


# Global instance for easy access
_preset_manager = None


def get_preset_manager() -> PresetConfigManager:
    """Get the global preset manager instance."""
    global _preset_manager
    if _preset_manager is None:
        _preset_manager = PresetConfigManager()
    return _preset_manager


def build_preset_cells(name: str, **kwargs) -> List[CellConfig]:
    """Convenience function to expand a preset into cells."""
    return get_preset_manager().build_cells(name, **kwargs)


__all__ = [
    'PresetConfigManager',
    'get_preset_manager',
    'build_preset_cells',
    'PRESET_CONFIG_DIR',
]
