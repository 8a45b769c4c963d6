"""dqs - difference-equation systems for Apéry-type log-power series."""

__version__ = "1.0.0"
