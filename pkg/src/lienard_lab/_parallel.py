"""Thread-pool map for grid evaluations.

The integrator kernel releases the GIL, so threads give real parallelism.
LIENARD_LAB_THREADS caps the worker count; results keep input order, so
parallel and serial runs produce identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    env = os.environ.get("LIENARD_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            n = 1
        return max(1, n)
    return max(1, min(4, os.cpu_count() or 1))


def parallel_map(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
