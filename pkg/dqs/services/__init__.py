"""Shared services: the series cache and the sweep worker pool."""

__all__ = [
    "SeriesCache",
    "SweepRunner",
    "get_series_cache",
]


def __getattr__(name: str):
    if name in {"SeriesCache", "get_series_cache"}:
        from .series_cache import SeriesCache, get_series_cache
        return {"SeriesCache": SeriesCache, "get_series_cache": get_series_cache}[name]
    if name == "SweepRunner":
        from .sweep_runner import SweepRunner
        return SweepRunner
    raise AttributeError(name)
