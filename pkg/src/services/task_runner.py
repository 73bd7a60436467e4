"""
Ordered Parallel Execution for qdesign

Runs independent pieces of verification or search work either in-process
or on a thread pool; search branches can instead go to forked worker
processes. Results always come back in submission order, so any reduction
over them is independent of worker scheduling and of --jobs.
"""

import logging
import multiprocessing
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Forked workers read the function from here; it is never pickled
_fork_lock = threading.Lock()
_forked_func: Optional[Callable] = None


def _call_forked(item):
    return _forked_func(item)


def fork_available() -> bool:
    return "fork" in multiprocessing.get_all_start_methods()


class ParallelRunner:
    """
    Map work items to results in submission order.

    With jobs=1 everything runs in the calling thread; otherwise a thread
    pool is used (numpy releases the GIL in the hot loops). With processes
    set, first_in_order runs its waves on forked worker processes, which is
    where pure-Python backtracking gains from more jobs; platforms without
    fork fall back to threads. A short history of runs is kept for
    diagnostics.
    """

    def __init__(self, jobs: int = 1, max_history: int = 100, processes: bool = False):
        self.jobs = max(1, int(jobs))
        self.processes = processes
        self.max_history = max_history
        self.task_history: List[Dict[str, Any]] = []

    @property
    def is_parallel(self) -> bool:
        return self.jobs > 1

    def map_ordered(
        self, func: Callable[[T], R], items: Iterable[T], label: str = "task"
    ) -> List[R]:
        """Apply func to every item; the i-th result belongs to the i-th item"""
        work: Sequence[T] = list(items)
        start = time.perf_counter()

        if not self.is_parallel or len(work) <= 1:
            results = [func(item) for item in work]
        else:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(func, work))

        duration = time.perf_counter() - start
        self._add_to_history(
            {
                "task_name": label,
                "items": len(work),
                "jobs": self.jobs,
                "duration": round(duration, 4),
                "completed_at": datetime.utcnow().isoformat(),
            }
        )
        logger.debug(f"{label}: {len(work)} items on {self.jobs} worker(s) in {duration:.3f}s")
        return results

    def first_in_order(
        self,
        func: Callable[[T], R],
        items: Iterable[T],
        accept: Callable[[R], bool],
        label: str = "task",
    ) -> List[R]:
        """
        Evaluate items and return results up to and including the first
        accepted one, in item order.

        Sequential mode stops at the first accepted result. Parallel mode
        evaluates in waves of `jobs` items and truncates, so the returned
        prefix is the same in both modes.
        """
        work = list(items)
        collected: List[R] = []
        if not self.is_parallel:
            for item in work:
                result = func(item)
                collected.append(result)
                if accept(result):
                    break
            self._add_to_history(
                {"task_name": label, "items": len(collected), "jobs": 1,
                 "completed_at": datetime.utcnow().isoformat()}
            )
            return collected

        with self._wave_executor(func, label) as run_wave:
            for offset in range(0, len(work), self.jobs):
                wave = run_wave(work[offset: offset + self.jobs])
                for result in wave:
                    collected.append(result)
                    if accept(result):
                        self._add_to_history(
                            {"task_name": label, "items": len(collected), "jobs": self.jobs,
                             "completed_at": datetime.utcnow().isoformat()}
                        )
                        return collected
        self._add_to_history(
            {"task_name": label, "items": len(collected), "jobs": self.jobs,
             "completed_at": datetime.utcnow().isoformat()}
        )
        return collected

    @contextmanager
    def _wave_executor(self, func: Callable[[T], R], label: str):
        """Yields a callable mapping one wave of items to results in order"""
        global _forked_func
        if self.processes and fork_available():
            with _fork_lock:
                _forked_func = func
                try:
                    with multiprocessing.get_context("fork").Pool(processes=self.jobs) as pool:
                        logger.debug(f"{label}: forked {self.jobs} worker processes")
                        yield lambda items: pool.map(_call_forked, items)
                finally:
                    _forked_func = None
            return
        if self.processes:
            logger.warning(f"{label}: fork is unavailable, running on threads")
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            yield lambda items: list(pool.map(func, items))

    def _add_to_history(self, task_info: Dict[str, Any]):
        self.task_history.append(task_info)
        if len(self.task_history) > self.max_history:
            self.task_history = self.task_history[-self.max_history:]

    def get_task_history(self, limit: Optional[int] = 10) -> List[Dict[str, Any]]:
        if not limit:
            return list(self.task_history)
        return self.task_history[-limit:]
