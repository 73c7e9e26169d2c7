"""Utility modules for DR Impute Sim."""

from .errors import (
    ArgumentError,
    ConfigError,
    DegenerateCellError,
    InsufficientDataError,
    MaskedValueError,
    SeparationError,
    SingularDesignError,
)
from .helpers import format_number, sanitize_filename, stable_hash32
from .file_utils import atomic_write_text, ensure_directory_exists
from .performance_monitor import performance_monitor
