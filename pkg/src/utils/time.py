"""Time utilities for consistent UTC timestamps and run timing."""

import time
from datetime import datetime, timezone


def utcnow() -> datetime:
    """Return timezone-aware current UTC time."""
    return datetime.now(timezone.utc)


class Stopwatch:
    """Monotonic wall-clock timer for a single solver run."""

    def __init__(self) -> None:
        self._start = time.perf_counter()

    def elapsed(self) -> float:
        """Seconds since construction."""
        return time.perf_counter() - self._start
