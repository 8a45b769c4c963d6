"""Bounded LRU cache of constructed series, shared by every sweep worker."""

from __future__ import annotations

from collections import OrderedDict
from threading import Lock
from typing import Callable, Hashable, List, TypeVar

from ..config import SERIES_CACHE_LIMIT
from ..logging import log

V = TypeVar("V")


class SeriesCache:
    """Keyed by constructor name and arguments.

    Values are immutable, so two workers racing on one key may both build it;
    the second write replaces an equal value.
    """

    def __init__(self, limit: int = SERIES_CACHE_LIMIT):
        self.limit = max(1, int(limit))
        self._cache: OrderedDict[Hashable, object] = OrderedDict()
        self._lock = Lock()
        self.hits = 0
        self.misses = 0

    def get_or_build(self, key: Hashable, builder: Callable[[], V]) -> V:
        with self._lock:
            if key in self._cache:
                self._cache.move_to_end(key)
                self.hits += 1
                return self._cache[key]  # type: ignore[return-value]
            self.misses += 1

        value = builder()

        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)
            while len(self._cache) > self.limit:
                evicted, _ = self._cache.popitem(last=False)
                log(f"[CACHE][EVICT] {evicted}")
        return value

    def __contains__(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._cache

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)

    def cached_keys(self) -> List[Hashable]:
        with self._lock:
            return list(self._cache.keys())

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self.hits = 0
            self.misses = 0


_DEFAULT_CACHE = SeriesCache()


def get_series_cache() -> SeriesCache:
    return _DEFAULT_CACHE
