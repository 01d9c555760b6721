# app/cache.py
import logging
import threading
from collections import OrderedDict
from datetime import datetime
from functools import wraps
from typing import Any, Dict, Hashable, Optional, Tuple

from app.config import get_settings

logger = logging.getLogger(__name__)

_MISSING = object()


# In-memory memo for pure computations: entries never go stale, so instead of
# a TTL the store is bounded and evicts the least recently used key.
class MemoryCache:
    def __init__(self, max_entries: Optional[int] = None):
        self.cache: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._max_entries = max_entries
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.evictions = 0

    @property
    def max_entries(self) -> int:
        if self._max_entries is not None:
            return self._max_entries
        return get_settings().cache_size

    @staticmethod
    def _generate_key(*args, **kwargs) -> Tuple:
        """Key from arguments; all arguments of memoized functions are hashable values"""
        return (args, tuple(sorted(kwargs.items())))

    def get(self, key: Hashable, default: Any = None) -> Any:
        with self._lock:
            value = self.cache.get(key, _MISSING)
            if value is _MISSING:
                self.misses += 1
                return default
            self.cache.move_to_end(key)
            self.hits += 1
            return value

    def set(self, key: Hashable, value: Any) -> None:
        limit = self.max_entries
        if limit <= 0:
            return
        with self._lock:
            self.cache[key] = value
            self.cache.move_to_end(key)
            while len(self.cache) > limit:
                self.cache.popitem(last=False)
                self.evictions += 1

    def delete(self, key: Hashable) -> None:
        with self._lock:
            self.cache.pop(key, None)

    def clear(self) -> None:
        with self._lock:
            self.cache.clear()
            self.hits = self.misses = self.evictions = 0

    def get_stats(self) -> Dict[str, Any]:
        with self._lock:
            lookups = self.hits + self.misses
            return {
                "total_entries": len(self.cache),
                "max_entries": self.max_entries,
                "hits": self.hits,
                "misses": self.misses,
                "evictions": self.evictions,
                "hit_rate": round(self.hits / lookups, 6) if lookups else None,
            }


# Global cache instance
memory_cache = MemoryCache()


def cached(key_prefix: str = ""):
    """Memoize a pure function in memory_cache"""
    def decorator(func):
        prefix = key_prefix or func.__qualname__

        @wraps(func)
        def wrapper(*args, **kwargs):
            cache_key = (prefix, memory_cache._generate_key(*args, **kwargs))
            result = memory_cache.get(cache_key, _MISSING)
            if result is not _MISSING:
                return result
            result = func(*args, **kwargs)
            memory_cache.set(cache_key, result)
            return result

        wrapper.uncached = func
        return wrapper

    return decorator


def invalidate_all_cache() -> None:
    """Drop every memoized value"""
    memory_cache.clear()
    logger.info("Coefficient cache cleared")


def get_cache_metrics() -> Dict[str, Any]:
    stats = memory_cache.get_stats()
    return {
        **stats,
        "reported_at": datetime.now().isoformat(),
    }
