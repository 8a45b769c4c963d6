"""Verification of the recurrence system and report assembly."""

from .recurrence import verify_eq16_exact, verify_eq17_exact, verify_numeric
from .sweep import SweepConfig, SweepPoint, default_sweep_config, numeric_sweep_config, sweep

__all__ = [
    "SweepConfig",
    "SweepPoint",
    "default_sweep_config",
    "numeric_sweep_config",
    "sweep",
    "verify_eq16_exact",
    "verify_eq17_exact",
    "verify_numeric",
]
