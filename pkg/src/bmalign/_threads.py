"""Thread-pool helper for pair and trial sweeps.

Results are returned in input order and every unit of work owns its inputs,
so the reductions built on top are independent of scheduling.  The BMA_THREADS
environment variable caps the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count(n_items: int) -> int:
    env = os.environ.get("BMA_THREADS")
    try:
        cap = int(env) if env else (os.cpu_count() or 1)
    except ValueError:
        cap = 1
    return max(1, min(cap, n_items))


def thread_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    work = list(items)
    workers = worker_count(len(work))
    if workers <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
