"""Application configuration constants."""

from __future__ import annotations

# Application metadata (echoed into every report). Keep APP_VERSION in sync
# with pyproject.toml.
APP_NAME = "dqs"
APP_VERSION = "1.0.0"

# Environment variable naming the optional JSON config file.
ENV_CONFIG_PATH = "DQS_CONFIG"

# Numeric evaluation
DEFAULT_PREC_BITS = 192
MIN_PREC_BITS = 64
GUARD_BITS = 24              # Extra working bits on top of the requested precision
NUMERIC_RESIDUAL_TARGET = 1e-12

# Series truncation: T = 2*nu + DEFAULT_T_MARGIN unless given explicitly
DEFAULT_T_MARGIN = 40

# Exact kernel
BINOMIAL_ROW_CAP = 256       # Memoized Pascal rows

# Family construction
SERIES_CACHE_LIMIT = 512     # Cached LogSeries objects (keyed by l, k, nu, T)

# Verification sweep
DEFAULT_NU_MIN = 2
DEFAULT_NU_MAX = 12
SWEEP_WORKERS = 1

# Output
DEFAULT_FORMAT = "table"
OUTPUT_FORMATS = ("table", "json", "csv")
