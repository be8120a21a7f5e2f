"""Shared worker-pool helper.

Results are always written into preallocated slots indexed by task number,
so the output is a pure function of the inputs whatever the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError

ENV_THREADS = "TOEPSPEC_THREADS"


def worker_count() -> int:
    """Worker cap from TOEPSPEC_THREADS (0 or unset means auto)."""
    raw = os.environ.get(ENV_THREADS, "0")
    try:
        val = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_THREADS} must be an integer, got {raw!r}") from exc
    if val < 0:
        raise ConfigError(f"{ENV_THREADS} must be nonnegative")
    if val == 0:
        return os.cpu_count() or 1
    return val


def map_into_slots(fn, tasks: list) -> list:
    """Evaluate fn over tasks, preserving order; parallel when workers > 1."""
    results = [None] * len(tasks)
    workers = min(worker_count(), max(len(tasks), 1))
    if workers <= 1 or len(tasks) <= 1:
        for i, t in enumerate(tasks):
            results[i] = fn(t)
        return results
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(fn, t): i for i, t in enumerate(tasks)}
        for fut, i in futures.items():
            results[i] = fut.result()
    return results
