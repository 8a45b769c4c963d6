"""Exception types. All derive from built-ins so callers can catch broadly."""

from __future__ import annotations


class PoleError(ZeroDivisionError):
    """Evaluation at a pole (R, log R, log z at 0, nu = 0 in A)."""


class IndexSetError(ValueError):
    """Invalid (l, k) pair, l outside {0, 1, 2} or matrix index out of range."""


class TruncationError(ValueError):
    """Truncation depth below its floor, or a coefficient queried below it."""


class DomainError(ValueError):
    """Argument outside the supported domain (|z| <= 1, precision too low, ...)."""
