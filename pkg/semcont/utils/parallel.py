"""
Order-preserving thread pool helpers.

numpy releases the GIL inside its kernels, so threads give real speedups for
the per-frame and per-cell work. Results always come back in input order.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from tqdm import tqdm

from semcont.config import settings

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return settings.SEMCONT_THREADS
    return max(1, min(int(threads), settings.SEMCONT_THREADS))


def progress(iterable: Iterable[T], desc: str, total: int | None = None) -> Iterable[T]:
    """Wrap `iterable` in a tqdm bar when progress output is enabled."""
    if not settings.SEMCONT_PROGRESS:
        return iterable
    return tqdm(iterable, desc=desc, total=total, leave=False)


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    threads: int | None = None,
    desc: str | None = None,
) -> list[R]:
    """
    Apply `fn` to every item, possibly on several threads.

    Args:
        fn: Function applied to each item
        items: Inputs, processed in any order
        threads: Worker cap (None -> settings.SEMCONT_THREADS)
        desc: Progress bar label; no bar when None

    Returns:
        Results in the same order as `items`
    """
    workers = resolve_threads(threads)
    if workers == 1 or len(items) <= 1:
        iterator = map(fn, items)
        if desc:
            iterator = progress(iterator, desc, total=len(items))
        return list(iterator)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        iterator = pool.map(fn, items)
        if desc:
            iterator = progress(iterator, desc, total=len(items))
        return list(iterator)
