"""Settings schema, validation and the effective run configuration.

Precedence is defaults < config file < command-line flags. The effective
configuration is echoed into every report so a run can be reproduced from it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional

from . import config as cfg
from .errors import DomainError
from .logging import log
from .user_settings import config_file_path, load_config_file

# (config_key, value_type, min_val, max_val)
SETTINGS_SCHEMA = [
    ("DEFAULT_PREC_BITS", int, cfg.MIN_PREC_BITS, 1 << 16),
    ("DEFAULT_T_MARGIN", int, 8, 10_000),
    ("DEFAULT_NU_MIN", int, 2, 10_000),
    ("DEFAULT_NU_MAX", int, 2, 10_000),
    ("SWEEP_WORKERS", int, 1, 64),
    ("SERIES_CACHE_LIMIT", int, 1, 1_000_000),
    ("DEFAULT_FORMAT", str, None, None),
]

_CHOICES = {"DEFAULT_FORMAT": cfg.OUTPUT_FORMATS}

# f_{l,1}(1, nu) tables start at nu = 0; the recurrence range starts at 2.
TABLE_NU_MAX_RANGE = (0, 10_000)

# Config keys as they appear in reports.
_REPORT_NAMES = {
    "DEFAULT_PREC_BITS": "prec_bits",
    "DEFAULT_T_MARGIN": "t_margin",
    "DEFAULT_NU_MIN": "nu_min",
    "DEFAULT_NU_MAX": "nu_max",
    "SWEEP_WORKERS": "jobs",
    "SERIES_CACHE_LIMIT": "cache_limit",
    "DEFAULT_FORMAT": "format",
}


def settings_definitions() -> dict[str, tuple[type, object, object]]:
    return {key: (val_type, min_val, max_val) for key, val_type, min_val, max_val in SETTINGS_SCHEMA}


def validate_settings_value(value, val_type: type, min_val, max_val, choices=None) -> tuple:
    """Returns (is_valid, parsed_value, error_msg)."""
    if isinstance(value, bool) or value is None:
        return False, None, "Invalid value"
    try:
        if val_type is int:
            if isinstance(value, float) and not value.is_integer():
                return False, None, "Not an integer"
            val = int(value)
        elif val_type is str:
            val = str(value).strip()
        else:
            return False, None, "Unknown type"
    except (TypeError, ValueError):
        return False, None, "Invalid number"

    if choices is not None and val not in choices:
        return False, None, f"One of: {', '.join(choices)}"
    if min_val is not None and val < min_val:
        return False, None, f"Min: {min_val}"
    if max_val is not None and val > max_val:
        return False, None, f"Max: {max_val}"
    return True, val, None


def _coerce_setting_value(config_key: str, value):
    val_type, min_val, max_val = settings_definitions()[config_key]
    is_valid, parsed, error = validate_settings_value(value, val_type, min_val, max_val, _CHOICES.get(config_key))
    if not is_valid:
        raise ValueError(f"{config_key}: {error}")
    return parsed


def table_nu_max(value) -> int:
    is_valid, parsed, error = validate_settings_value(value, int, *TABLE_NU_MAX_RANGE)
    if not is_valid:
        raise DomainError(f"table nu bound: {error}")
    return parsed


@dataclass(frozen=True)
class EffectiveConfig:
    prec_bits: int = cfg.DEFAULT_PREC_BITS
    t_margin: int = cfg.DEFAULT_T_MARGIN
    nu_min: int = cfg.DEFAULT_NU_MIN
    nu_max: int = cfg.DEFAULT_NU_MAX
    jobs: int = cfg.SWEEP_WORKERS
    cache_limit: int = cfg.SERIES_CACHE_LIMIT
    format: str = cfg.DEFAULT_FORMAT
    source: str = "defaults"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def file_overrides(path: Optional[Path] = None) -> dict[str, Any]:
    """Validated overrides from the config file, keyed by report name.

    Unknown keys and invalid values are logged and skipped.
    """
    saved = load_config_file(path)
    overrides: dict[str, Any] = {}
    definitions = settings_definitions()
    for config_key, raw_value in saved.items():
        if config_key not in definitions:
            log(f"[CONFIG][WARN] Unknown setting {config_key!r} ignored")
            continue
        try:
            overrides[_REPORT_NAMES[config_key]] = _coerce_setting_value(config_key, raw_value)
        except ValueError as exc:
            log(f"[CONFIG][WARN] Ignoring file value: {exc}")
    if overrides:
        log(f"[CONFIG] Loaded {len(overrides)} settings from {path or config_file_path()}")
    return overrides


def effective_config(cli_values: Optional[dict[str, Any]] = None, config_path: Optional[str] = None) -> EffectiveConfig:
    """Merge defaults, the config file and command-line values (None means "not given")."""
    path = config_file_path(config_path)
    merged = file_overrides(path)
    source = f"file:{path}" if merged else "defaults"

    by_report_name = {v: k for k, v in _REPORT_NAMES.items()}
    for name, value in (cli_values or {}).items():
        if value is None or name not in by_report_name:
            continue
        try:
            merged[name] = _coerce_setting_value(by_report_name[name], value)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        source = "cli" if source == "defaults" else source + "+cli"

    result = EffectiveConfig(**merged, source=source)
    if result.nu_max < result.nu_min:
        raise DomainError(f"empty nu range [{result.nu_min}, {result.nu_max}]")
    return result
