"""
Ordered parallel map.

Work items are independent and results are returned in input order, so the
outcome never depends on how many workers ran them. The worker count is
capped by ``MBNSEP_THREADS``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config.environment import get_thread_count

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int] = None) -> int:
    """Clamp a requested worker count to ``[1, MBNSEP_THREADS]``."""
    cap = get_thread_count()
    if workers is None:
        return cap
    return max(1, min(int(workers), cap))


def ordered_map(
    func: Callable[[T], R],
    items: Iterable[T],
    workers: Optional[int] = None,
) -> List[R]:
    """
    Apply ``func`` to every item, possibly concurrently, keeping input order.

    Args:
        func: Pure function of one item.
        items: Work items.
        workers: Requested worker count (``None`` = environment cap).

    Returns:
        Results in the same order as ``items``. The first exception raised by
        any item is re-raised.
    """
    items = list(items)
    n_workers = min(resolve_workers(workers), max(1, len(items)))
    if n_workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, items))
