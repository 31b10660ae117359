"""Thread-pool fan-out for per-graph work.

Results always come back in input order, so callers are worker-count
independent.  The pool size comes from the ``threads`` argument, else
the ``GRAPHSET_THREADS`` environment variable, else 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ParameterError


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("GRAPHSET_THREADS", "")
        threads = int(env) if env.strip() else 1
    if threads < 1:
        raise ParameterError(f"thread count must be >= 1, got {threads}")
    return threads


def parallel_map(fn, items, threads: int | None = None) -> list:
    """Apply ``fn`` to every item, in-order results, optional pool."""
    n = thread_count(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
