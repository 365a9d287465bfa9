"""Worker-count plumbing.

Thread count comes from the KMP_THREADS environment variable (default
1). Results always come back in submission order, so outputs do not
depend on how many workers ran; the compiled kernels release the GIL,
which is where the actual overlap happens.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("KMP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(func, items) -> list:
    """Apply func to each item, preserving order of results."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
