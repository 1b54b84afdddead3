from __future__ import annotations

import threading
import time

import pytest

from lzcli.sweep import run_sweep


def _slow_square(x: int) -> int:
    # Later items finish first.
    time.sleep(0.01 * (5 - x))
    return x * x


def test_results_follow_input_order() -> None:
    assert run_sweep(_slow_square, [0, 1, 2, 3, 4], max_workers=5) == [0, 1, 4, 9, 16]


def test_sequential_path() -> None:
    threads: set[str] = set()

    def _record(x: int) -> int:
        threads.add(threading.current_thread().name)
        return x + 1

    assert run_sweep(_record, [1, 2, 3], max_workers=1) == [2, 3, 4]
    assert threads == {threading.current_thread().name}


def test_empty_input() -> None:
    assert run_sweep(_slow_square, [], max_workers=4) == []


def test_first_error_is_reraised_after_the_pool_drains() -> None:
    finished: list[int] = []

    def _task(x: int) -> int:
        if x == 2:
            raise ValueError("bad coupling")
        time.sleep(0.01)
        finished.append(x)
        return x

    with pytest.raises(ValueError, match="bad coupling"):
        run_sweep(_task, [0, 1, 2, 3], max_workers=4)
    assert sorted(finished) == [0, 1, 3]
