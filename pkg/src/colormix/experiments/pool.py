"""Ordered parallel map and per-cell random streams."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def cell_rng(*key: int) -> np.random.Generator:
    """Independent generator for one experiment cell, keyed by integers such as (seed, tag, index)."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in key]))


def cell_seed(*key: int) -> int:
    """A 63-bit integer seed derived from the same key, for records and replay."""
    return int(np.random.SeedSequence([int(k) for k in key]).generate_state(2, np.uint32).view(np.uint64)[0] >> 1)


def ordered_map(func: Callable[[T], R], tasks: Iterable[T], jobs: int = 1) -> list[R]:
    """map() over a process pool; results come back in task order.

    Tasks are handed out one at a time, so idle workers pick up the next
    pending cell regardless of how long earlier cells take.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, tasks, chunksize=1))
