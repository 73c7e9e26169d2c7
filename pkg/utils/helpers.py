"""
General utility functions for DR Impute Sim.

This module contains helper functions for stable hashing (used to key
random streams), number formatting and small conversions.
"""

import hashlib
import logging
import math
import re
from typing import Optional

logger = logging.getLogger(__name__)


def hash_text(text: str) -> str:
    """Create a SHA-256 hex digest for text content.

    Args:
        text: Text content to hash

    Returns:
        Hexadecimal hash string
    """
    if not text:
        return hashlib.sha256(b"").hexdigest()

    return hashlib.sha256(text.encode("utf-8", errors="ignore")).hexdigest()


def stable_hash32(text: str) -> int:
    """Map text to a 32-bit integer that is identical across processes.

    Args:
        text: Identifier to hash

    Returns:
        Integer in [0, 2**32)
    """
    return int(hash_text(text)[:8], 16)


def sanitize_filename(filename: str, max_length: int = 100) -> str:
    """Sanitize a string to be safe for use as a filename.

    Args:
        filename: Input filename string
        max_length: Maximum length for the filename

    Returns:
        Sanitized filename safe for filesystem use
    """
    if not filename:
        return "unnamed"

    sanitized = re.sub(r'[<>:"/\\|?*]', '_', filename)
    sanitized = re.sub(r'[^\w\-_.]', '_', sanitized)
    sanitized = re.sub(r'_+', '_', sanitized)
    sanitized = sanitized.strip('_')

    if len(sanitized) > max_length:
        sanitized = sanitized[:max_length].rstrip('_')

    return sanitized or "unnamed"


def format_number(value: Optional[float], decimals: int = 6) -> str:
    """Format a float for reports; NaN and None become empty strings.

    Args:
        value: Number to format
        decimals: Digits after the decimal point

    Returns:
        Fixed-point string
    """
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    text = f"{value:.{decimals}f}"
    # avoid "-0.000000" so reruns diff cleanly
    if float(text) == 0.0:
        text = f"{0.0:.{decimals}f}"
    return text


__all__ = [
    'hash_text',
    'stable_hash32',
    'sanitize_filename',
    'format_number',
]
