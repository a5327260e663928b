"""Order-preserving map over independent bidegree computations."""

from __future__ import annotations

import multiprocessing
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")

_TASK: Callable = None  # inherited by forked workers


def _call(x):
    return _TASK(x)


def pmap(fn: Callable[[T], U], items: Sequence[T], jobs: int = 1) -> List[U]:
    """``[fn(x) for x in items]``, optionally spread over forked workers.

    Results come back in input order, so output never depends on ``jobs``.
    Workers are forked, so ``fn`` may be a closure; memoised state they
    build is discarded with them.
    """
    global _TASK
    items = list(items)
    if jobs <= 1 or len(items) < 2 or "fork" not in multiprocessing.get_all_start_methods():
        return [fn(x) for x in items]
    prev, _TASK = _TASK, fn
    try:
        with multiprocessing.get_context("fork").Pool(min(jobs, len(items))) as pool:
            return pool.map(_call, items, chunksize=1)
    finally:
        _TASK = prev
