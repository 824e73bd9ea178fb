"""Order-preserving fan-out over a thread pool.

Work units must be pure functions of their inputs. Results are always
yielded in submission order — never completion order — so output is
bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def map_streamed(fn: Callable[[T], R], items: Sequence[T], workers: int) -> Iterator[R]:
    """Apply fn to each item, yielding results in input order."""
    if workers <= 1 or len(items) <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, items)


def chunk_spans(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Split range(total) into [lo, hi) spans of at most chunk_size."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    return [(lo, min(lo + chunk_size, total)) for lo in range(0, total, chunk_size)]
