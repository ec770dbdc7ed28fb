import asyncio
import contextvars
import logging
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Callable, Dict, Hashable, Iterable, List, TypeVar

_LOGGER = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)
T = TypeVar("T")


async def async_run_cells(
    func: Callable[[K], T],
    keys: Iterable[K],
    threads: int = 1,
) -> Dict[K, T]:
    """Evaluate independent cells on a thread pool.

    Args:
        func: Pure function of one key
        keys: Cell keys; the result keeps this order
        threads: Maximum number of worker threads

    Returns:
        Mapping from key to result, in key order regardless of scheduling
    """
    keys = list(keys)
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        futures = [
            loop.run_in_executor(executor, contextvars.copy_context().run, func, key)
            for key in keys
        ]
        results = await asyncio.gather(*futures)
    _LOGGER.debug("Evaluated %d cells on %d threads", len(keys), threads)
    return dict(zip(keys, results))


def run_cells(func: Callable[[K], T], keys: Iterable[K], threads: int = 1) -> Dict[K, T]:
    """Synchronous entry point for async_run_cells.

    With a single thread the cells run inline, in order. Inside a running
    event loop the pool is driven directly instead of through asyncio.run.
    """
    keys = list(keys)
    if threads <= 1 or len(keys) <= 1:
        return {key: func(key) for key in keys}
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(async_run_cells(func, keys, threads))
    with ThreadPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(contextvars.copy_context().run, func, key) for key in keys]
        return {key: future.result() for key, future in zip(keys, futures)}


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def parse_name_list(text: str) -> List[str]:
    """Split 'x, y,z' or 'x y z' into names."""
    return [part for part in text.replace(",", " ").split() if part]


def parse_int_list(text: str) -> List[int]:
    """Split a comma or space separated list of integers."""
    return [int(part) for part in parse_name_list(text)]
