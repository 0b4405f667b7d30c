import logging
import threading
from queue import Empty, Queue
from typing import Any, Callable


class BlockWorkerThread(threading.Thread):
    """
    Worker thread that drains a queue of independent block tasks.

    This thread:
    - Takes (position, task) pairs from a shared queue
    - Solves each task with the given solve function
    - Delivers (position, result, error) via callback when a task is done
    - Never lets one failing block stop the remaining ones
    """

    def __init__(
        self,
        tasks: Queue,
        solve: Callable[[Any], Any],
        callback: Callable[[int, Any, Exception | None], None],
    ) -> None:
        super().__init__(daemon=True)
        self._tasks = tasks
        self._solve = solve
        self._callback = callback
        self._logger = logging.getLogger(__name__)

    def run(self) -> None:
        while True:
            try:
                position, task = self._tasks.get_nowait()
            except Empty:
                break
            try:
                self._callback(position, self._solve(task), None)
            except Exception as error:
                self._logger.error("Error at BlockWorkerThread on task %d: %s", position, str(error))
                self._callback(position, None, error)
            finally:
                self._tasks.task_done()


def run_tasks(tasks: list[Any], solve: Callable[[Any], Any], workers: int = 1, progress=None) -> list[Any]:
    """
    Solve tasks sequentially or on a pool of BlockWorkerThreads; results come
    back in task order. The first error, in task order, is re-raised.
    """
    if workers <= 1 or len(tasks) <= 1:
        results = []
        for task in tasks:
            results.append(solve(task))
            if progress is not None:
                progress.update(1)
        return results

    queue: Queue = Queue()
    for position, task in enumerate(tasks):
        queue.put((position, task))

    results: list[Any] = [None] * len(tasks)
    errors: dict[int, Exception] = {}
    lock = threading.Lock()

    def collect(position: int, result: Any, error: Exception | None) -> None:
        with lock:
            if error is not None:
                errors[position] = error
            else:
                results[position] = result
            if progress is not None:
                progress.update(1)

    threads = [BlockWorkerThread(queue, solve, collect) for _ in range(min(workers, len(tasks)))]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    if errors:
        raise errors[min(errors)]
    return results
