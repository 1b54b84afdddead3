"""Concurrent sweeps over couplings with deterministic output order.

Tasks run on a ThreadPoolExecutor; results are collected as they finish but
returned in submission order, so output never depends on scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import Future, ThreadPoolExecutor, as_completed
from typing import Callable, Sequence, TypeVar

from lztimes.logger import get_logger

logger = get_logger(__name__, component="sweep")

T = TypeVar("T")
R = TypeVar("R")


def run_sweep(
    fn: Callable[[T], R],
    items: Sequence[T],
    *,
    max_workers: int = 4,
    label: str = "sweep",
) -> list[R]:
    """Apply *fn* to every item; results follow the order of *items*.

    The first failing task's exception is re-raised after the pool drains.
    """
    started = time.monotonic()
    if max_workers <= 1 or len(items) <= 1:
        results = [fn(item) for item in items]
        logger.debug("sweep_done", label=label, tasks=len(items), elapsed=round(time.monotonic() - started, 3))
        return results

    slots: list[R | None] = [None] * len(items)
    first_error: BaseException | None = None
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix=f"lz_{label}") as pool:
        futures: dict[Future[R], int] = {pool.submit(fn, item): i for i, item in enumerate(items)}
        for done, future in enumerate(as_completed(futures), start=1):
            index = futures[future]
            try:
                slots[index] = future.result()
            except Exception as exc:
                logger.error("sweep_task_failed", label=label, index=index, error=str(exc))
                if first_error is None:
                    first_error = exc
                continue
            logger.debug("sweep_progress", label=label, done=done, total=len(items))

    if first_error is not None:
        raise first_error
    logger.debug("sweep_done", label=label, tasks=len(items), elapsed=round(time.monotonic() - started, 3))
    return slots  # type: ignore[return-value]


__all__ = ["run_sweep"]
