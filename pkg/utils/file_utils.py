"""
File and directory utilities for DR Impute Sim.

This module handles report and dataset writes. Files are written to a
temporary path first and moved into place.
"""

import logging
import os
import shutil
import threading

logger = logging.getLogger(__name__)

_file_lock = threading.Lock()


def ensure_directory_exists(directory: str) -> bool:
    """Ensure a directory exists, creating it if necessary.

    Args:
        directory: Directory path to ensure exists

    Returns:
        True if directory exists or was created successfully
    """
    try:
        os.makedirs(directory, exist_ok=True)
        return True
    except OSError as e:
        logger.error(f"Failed to create directory {directory}: {e}")
        return False


def atomic_write_text(file_path: str, text: str) -> None:
    """Write text to file atomically.

    The content is written byte-for-byte (no newline translation) so that
    reruns with the same seed produce identical files on every platform.

    Args:
        file_path: Target file path
        text: Content to write

    Raises:
        OSError: If the file cannot be written
    """
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)

    temp_path = f"{file_path}.tmp"
    with _file_lock:
        try:
            with open(temp_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            shutil.move(temp_path, file_path)
            logger.debug(f"Successfully wrote {len(text)} chars to {file_path}")
        except OSError as e:
            logger.error(f"Failed to write {file_path}: {e}")
            if os.path.exists(temp_path):
                try:
                    os.remove(temp_path)
                except OSError:
                    pass
            raise


__all__ = [
    'ensure_directory_exists',
    'atomic_write_text',
]
