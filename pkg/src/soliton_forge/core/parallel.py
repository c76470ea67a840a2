"""joblib map over residual grids, capped by SOLITON_FORGE_THREADS."""

from __future__ import annotations

import logging
import os
import warnings
from collections.abc import Callable, Iterable
from typing import TypeVar

from joblib import Parallel, delayed

from .config import MAX_WORKERS, THREADS_ENV_VAR

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def max_workers() -> int:
    """Worker cap: the environment variable if valid, else the configured default."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return max(1, MAX_WORKERS)
    try:
        value = int(raw)
    except ValueError:
        warnings.warn(
            f"soliton-forge: ignoring non-integer {THREADS_ENV_VAR}={raw!r}", stacklevel=2
        )
        return max(1, MAX_WORKERS)
    return max(1, value)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply *fn* to every item, preserving order.

    Runs inline when the cap is 1; otherwise on joblib's threading backend,
    so closures over samples and tubes need no pickling.
    """
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug("parallel_map: %d items on %d threads", len(items), workers)
    return list(Parallel(n_jobs=workers, prefer="threads")(delayed(fn)(item) for item in items))
