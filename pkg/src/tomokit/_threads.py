"""Bounded thread pool for embarrassingly parallel grid evaluations.

``TOMOKIT_THREADS`` caps the worker count (default: CPU count, at most 8).
Results are always collected in submission order, so parallel evaluation is
deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence


def worker_count() -> int:
    env = os.environ.get("TOMOKIT_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError:
            n = 1
        return max(1, n)
    return max(1, min(os.cpu_count() or 1, 8))


def map_ordered(fn: Callable, items: Sequence | Iterable) -> list:
    """Like ``list(map(fn, items))`` but threaded; order of results preserved."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
