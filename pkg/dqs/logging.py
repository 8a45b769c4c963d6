"""Logging utilities with timing and check counting."""

from __future__ import annotations
import sys
import time
from threading import Lock
from typing import Optional


class Logger:
    """Process logger with timestamps and a running check counter.

    Lines go to stderr; stdout is reserved for reports.
    """

    def __init__(self):
        self._start_time: float = time.perf_counter()
        self._checks: int = 0
        self._lock = Lock()
        self.enabled: bool = True

    @property
    def checks(self) -> int:
        """Number of checks started so far."""
        return self._checks

    def increment_checks(self) -> None:
        with self._lock:
            self._checks += 1

    @property
    def elapsed(self) -> float:
        """Seconds since logger was created."""
        return time.perf_counter() - self._start_time

    def log(self, msg: str) -> None:
        """Log a message with timestamp and check number."""
        if not self.enabled:
            return
        line = f"[{self.elapsed:7.3f}s C{self._checks:06d}] {msg}\n"
        try:
            with self._lock:
                sys.stderr.write(line)
                sys.stderr.flush()
        except Exception:
            pass

    def __call__(self, msg: str) -> None:
        """Shorthand for log()."""
        self.log(msg)


# Global logger instance
_logger: Optional[Logger] = None


def get_logger() -> Logger:
    """Get or create the global logger instance."""
    global _logger
    if _logger is None:
        _logger = Logger()
    return _logger


def log(msg: str) -> None:
    """Log a message using the global logger."""
    get_logger().log(msg)


def set_enabled(enabled: bool) -> None:
    get_logger().enabled = bool(enabled)


def increment_checks() -> None:
    get_logger().increment_checks()


def now() -> float:
    """Current time in seconds (high precision)."""
    return time.perf_counter()
