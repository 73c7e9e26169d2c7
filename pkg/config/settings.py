"""
Configuration and settings for DR Impute Sim.

This module centralizes all configuration parameters, environment variables,
and constants used throughout the simulation engine.
"""

import os

try:
    import psutil
    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False


def _default_threads() -> int:
    """Worker count when neither --threads nor DRSIM_THREADS is given."""
    env_value = os.environ.get('DRSIM_THREADS')
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            pass
    if PSUTIL_AVAILABLE:
        physical = psutil.cpu_count(logical=False)
        if physical:
            return physical
    return os.cpu_count() or 1


# ==================== Core Application Settings ====================

# Output directory for reports and run logs
DEFAULT_OUT_DIR = os.environ.get('DRSIM_OUT_DIR', 'results')

# Monte-Carlo design defaults (500 replications, m = 20, four sample sizes)
DEFAULT_REPS = int(os.environ.get('DRSIM_REPS', 500))
DEFAULT_M = int(os.environ.get('DRSIM_M', 20))
DEFAULT_N_LIST = (100, 500, 1000, 2000)
DEFAULT_SEED = int(os.environ.get('DRSIM_SEED', 20240928))
DEFAULT_THREADS = _default_threads()

# Report formats understood by the writer
REPORT_FORMATS = ('csv', 'markdown')
DEFAULT_FORMATS = REPORT_FORMATS

# ==================== Numerical Parameters ====================

# IRLS (logistic regression)
IRLS_MAX_ITER = 50
IRLS_SCORE_TOL = 1e-8
IRLS_DEVIANCE_TOL = 1e-10
IRLS_STEP_TOL = 1e-6
SEPARATION_EPS = 1e-10

# Relative pivot size below which a QR column counts as dependent
SINGULARITY_TOL = 1e-10

# Propensity scores are clipped to [PROPENSITY_CLIP, 1 - PROPENSITY_CLIP]
PROPENSITY_CLIP = 1e-6

# Columns of ns(v) when the formula gives no df
DEFAULT_SPLINE_DF = 3

# ==================== Simulation Harness ====================

TRUE_ATE = 1.0
DEFAULT_CONFIDENCE = 0.95
MIN_COMPLETE_CASE_ARM_ROWS = 30

# Cells with more failed replications than this are flagged invalid
MAX_FAILURE_FRACTION = 0.10

# Cells slower than this (seconds) are logged as slow
CELL_SLOW_THRESHOLD = 60.0

# ==================== Logging Configuration ====================

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
LOG_FILE_NAME = 'run.log'
DEFAULT_LOG_LEVEL = os.environ.get('DRSIM_LOG_LEVEL', 'INFO')

# Log levels for different components
LOG_LEVELS = {
    'numerics': 'INFO',
    'dgp': 'INFO',
    'formula': 'INFO',
    'imputation': 'INFO',
    'estimators': 'INFO',
    'pooling': 'INFO',
    'harness': 'INFO',
    'config': 'INFO',
}

# ==================== Feature Flags ====================

FEATURES = {
    'progress_bars': os.environ.get('DRSIM_PROGRESS', '1') != '0',
    'log_cell_resources': True,  # RSS delta per cell via psutil
}

# ==================== Export All Settings ====================

__all__ = [
    # Core settings
    'DEFAULT_OUT_DIR',
    'DEFAULT_REPS',
    'DEFAULT_M',
    'DEFAULT_N_LIST',
    'DEFAULT_SEED',
    'DEFAULT_THREADS',
    'REPORT_FORMATS',
    'DEFAULT_FORMATS',
    # Numerics
    'IRLS_MAX_ITER',
    'IRLS_SCORE_TOL',
    'IRLS_DEVIANCE_TOL',
    'IRLS_STEP_TOL',
    'SEPARATION_EPS',
    'SINGULARITY_TOL',
    'PROPENSITY_CLIP',
    'DEFAULT_SPLINE_DF',
    # Harness
    'TRUE_ATE',
    'DEFAULT_CONFIDENCE',
    'MIN_COMPLETE_CASE_ARM_ROWS',
    'MAX_FAILURE_FRACTION',
    'CELL_SLOW_THRESHOLD',
    # Logging
    'LOG_FORMAT',
    'LOG_FILE_NAME',
    'DEFAULT_LOG_LEVEL',
    'LOG_LEVELS',
    # Features
    'FEATURES',
]
