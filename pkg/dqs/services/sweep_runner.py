"""Threaded execution of independent verification tasks.

Each task yields a list of reports. A task that raises is turned into a single
fail report and the remaining tasks still run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from queue import Empty, PriorityQueue
from threading import Lock, Thread
from typing import Any, Callable, List

from ..config import SWEEP_WORKERS
from ..logging import log, now
from ..types import CheckReport


@dataclass
class SweepTask:
    """A unit of work; lower priority runs first, ties by submission order."""
    priority: int
    sequence: int
    check_id: str
    params: dict[str, Any]
    run: Callable[[], List[CheckReport]] = field(compare=False)

    def __lt__(self, other: SweepTask) -> bool:
        return (self.priority, self.sequence) < (other.priority, other.sequence)


class SweepRunner:
    """Priority-ordered pool of worker threads draining one task queue."""

    def __init__(self, workers: int = SWEEP_WORKERS):
        self.task_queue: PriorityQueue[SweepTask] = PriorityQueue()
        self.workers = max(1, int(workers))
        self.results: List[CheckReport] = []
        self.results_lock = Lock()
        self._sequence = 0

    def submit(self, check_id: str, params: dict[str, Any], run: Callable[[], List[CheckReport]],
               priority: int = 0) -> None:
        self.task_queue.put(SweepTask(priority, self._sequence, check_id, params, run))
        self._sequence += 1

    def _worker_loop(self) -> None:
        while True:
            try:
                task = self.task_queue.get_nowait()
            except Empty:
                return

            start = now()
            try:
                reports = task.run()
            except Exception as exc:
                log(f"[SWEEP][ERR] {task.check_id}: {exc!r}")
                reports = [CheckReport(
                    check_id=task.check_id,
                    params={**task.params, "error": repr(exc)},
                    status="fail",
                    elapsed_ms=int((now() - start) * 1000),
                )]

            with self.results_lock:
                self.results.extend(reports)
            self.task_queue.task_done()

    def run(self) -> List[CheckReport]:
        """Run every queued task and return the reports sorted by check_id."""
        if self.workers == 1:
            self._worker_loop()
        else:
            threads = [Thread(target=self._worker_loop, daemon=True) for _ in range(self.workers)]
            for thread in threads:
                thread.start()
            for thread in threads:
                thread.join()
        with self.results_lock:
            results = sorted(self.results, key=lambda r: r.check_id)
            self.results = []
        return results
