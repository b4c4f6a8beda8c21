"""Worker pool helpers with order-preserving results."""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from .constants import DEFAULT_THREADS, ENV_THREADS
from .errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")


def threads_from_env(default: int = DEFAULT_THREADS) -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_THREADS} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{ENV_THREADS} must be >= 1, got {value}")
    return value


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """Apply ``func`` to every item; results keep input order for any thread count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
