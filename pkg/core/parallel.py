import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

from loguru import logger

from core.config import EVAL_CHUNK_BUDGET, OMEGASURF_THREADS

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(requested: Optional[int] = None) -> int:
    """--threads wins, then OMEGASURF_THREADS, then the machine's core count."""
    if requested:
        return max(1, int(requested))
    if OMEGASURF_THREADS > 0:
        return OMEGASURF_THREADS
    return max(1, os.cpu_count() or 1)


def chunk_length(segment_count: int, weight: int = 1) -> int:
    """Points per chunk. Depends on the scene only, never on the thread count."""
    return max(1, EVAL_CHUNK_BUDGET // max(1, segment_count * weight))


def chunk_slices(total: int, length: int) -> List[slice]:
    return [slice(start, min(start + length, total)) for start in range(0, total, length)]


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = 1) -> List[R]:
    """Map `fn` over `items`; results always come back in input order."""
    workers = resolve_threads(threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Dispatching {len(items)} chunks over {workers} threads")
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def flatten(parts: Iterable[List[R]]) -> List[R]:
    return [item for part in parts for item in part]
