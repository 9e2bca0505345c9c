"""Per-token token-bucket rate limiter."""

from __future__ import annotations

import math
import threading
import time
from typing import Callable


class TokenBucketLimiter:
    """Capacity 30, refill 0.5/s by default; buckets start full, so traffic
    below the sustained rate never sees a rejection."""

    def __init__(
        self,
        capacity: int = 30,
        refill_per_s: float = 0.5,
        clock: Callable[[], float] = time.monotonic,
    ) -> None:
        self._capacity = float(capacity)
        self._refill = refill_per_s
        self._clock = clock
        self._buckets: dict[str, tuple[float, float]] = {}  # key -> (tokens, last)
        self._lock = threading.Lock()

    def check(self, key: str) -> tuple[bool, int]:
        """Consume one token for key; returns (allowed, retry_after_seconds)."""
        now = self._clock()
        with self._lock:
            tokens, last = self._buckets.get(key, (self._capacity, now))
            tokens = min(self._capacity, tokens + (now - last) * self._refill)
            if tokens >= 1.0:
                self._buckets[key] = (tokens - 1.0, now)
                return True, 0
            self._buckets[key] = (tokens, now)
            retry_after = max(1, math.ceil((1.0 - tokens) / self._refill))
            return False, retry_after
