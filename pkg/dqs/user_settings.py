"""Location and loading of the optional JSON config file."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Optional

from .config import APP_NAME, ENV_CONFIG_PATH
from .logging import log


def config_file_path(explicit: Optional[str] = None) -> Path:
    """``--config`` beats ``$DQS_CONFIG`` beats the XDG location."""
    if explicit:
        return Path(explicit)

    override = os.environ.get(ENV_CONFIG_PATH)
    if override:
        return Path(override)

    base = os.environ.get("XDG_CONFIG_HOME")
    if base:
        return Path(base) / APP_NAME / "config.json"
    return Path.home() / ".config" / APP_NAME / "config.json"


def load_config_file(path: Optional[Path] = None) -> dict[str, Any]:
    """Key/value overrides from the config file; empty when missing or unreadable."""
    path = path if path is not None else config_file_path()
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        return {}
    except (OSError, ValueError) as exc:
        log(f"[CONFIG][WARN] Cannot read {path}: {exc}")
        return {}

    if not isinstance(data, dict):
        log(f"[CONFIG][WARN] {path} does not hold a JSON object; ignored")
        return {}
    return data
