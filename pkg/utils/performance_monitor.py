"""
Performance monitoring for DR Impute Sim.

Times simulation cells and records the resident-memory delta of the
orchestrating process.
"""

import logging
import os
import time
from contextlib import contextmanager
from typing import Dict, Generator

try:
    import psutil
    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False

logger = logging.getLogger(__name__)


def _current_rss() -> int:
    if not PSUTIL_AVAILABLE:
        return 0
    try:
        return psutil.Process(os.getpid()).memory_info().rss
    except psutil.Error:
        return 0


@contextmanager
def performance_monitor(operation_name: str,
                        threshold_seconds: float = 1.0,
                        track_memory: bool = True) -> Generator[Dict, None, None]:
    """Context manager for monitoring operation performance.

    Args:
        operation_name: Name of the operation being monitored
        threshold_seconds: Log warning if operation takes longer than this
        track_memory: sample process RSS before and after

    Yields:
        Metrics dictionary; 'duration' and 'memory_delta' are filled on exit
    """
    start_time = time.perf_counter()
    initial_memory = _current_rss() if track_memory else 0
    metrics = {
        'operation': operation_name,
        'duration': 0.0,
        'initial_memory': initial_memory,
        'memory_delta': 0,
    }

    try:
        yield metrics
    finally:
        duration = time.perf_counter() - start_time
        metrics['duration'] = duration
        if initial_memory:
            metrics['memory_delta'] = _current_rss() - initial_memory

        memory_mb = metrics['memory_delta'] / (1024 * 1024)
        if duration > threshold_seconds:
            logger.warning(f"Slow operation: {operation_name} took {duration:.2f}s "
                           f"(RSS {memory_mb:+.1f} MB)")
        else:
            logger.debug(f"Operation: {operation_name} completed in {duration:.2f}s "
                         f"(RSS {memory_mb:+.1f} MB)")


__all__ = ['performance_monitor']
