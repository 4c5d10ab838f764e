"""Replication executors resolved by name, in the manner of the workflow runners.

Results always come back in task order, so outputs do not depend on ``jobs``.
"""

from __future__ import annotations

import logging
import threading
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Protocol, TypeVar, runtime_checkable

from sockopt.environment.simulator import simulate
from sockopt.errors import RunCancelledError

if TYPE_CHECKING:
    from sockopt.catalogue.models import Catalogue
    from sockopt.environment.models import SimConfig
    from sockopt.metrics.models import RunMetrics

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@runtime_checkable
class ReplicationExecutor(Protocol):
    name: str

    def map(self, fn: Callable[[Any], Any], tasks: Sequence[Any]) -> list[Any]: ...


class SerialExecutor:
    name = "serial"

    def __init__(self, jobs: int = 1) -> None:
        self.jobs = 1

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
        return [fn(task) for task in tasks]


class ProcessExecutor:
    name = "process"

    def __init__(self, jobs: int = 2) -> None:
        self.jobs = max(1, jobs)

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
        if len(tasks) <= 1 or self.jobs == 1:
            return [fn(task) for task in tasks]
        chunksize = max(1, len(tasks) // (self.jobs * 4))
        pool = ProcessPoolExecutor(max_workers=self.jobs)
        try:
            results = list(pool.map(fn, tasks, chunksize=chunksize))
        except BaseException:
            # an interrupt must not wait for every queued replication
            pool.shutdown(wait=False, cancel_futures=True)
            raise
        pool.shutdown()
        return results


class CancellableExecutor:
    """Feeds ``inner`` in batches and stops between batches once ``cancel`` is set.

    Batches are contiguous slices, so results keep task order and do not depend
    on the batch size.
    """

    def __init__(self, inner: ReplicationExecutor, cancel: threading.Event, *, batch: int | None = None) -> None:
        self.inner = inner
        self.cancel = cancel
        self.name = inner.name
        self.batch = batch if batch is not None else max(1, 8 * getattr(inner, "jobs", 1))
        if self.batch < 1:
            msg = f"batch must be >= 1, got {self.batch}"
            raise ValueError(msg)

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
        results: list[R] = []
        for start in range(0, len(tasks), self.batch):
            if self.cancel.is_set():
                msg = f"cancelled after {len(results)} of {len(tasks)} tasks"
                raise RunCancelledError(msg)
            results.extend(self.inner.map(fn, tasks[start : start + self.batch]))
        return results


ExecutorFactory = Callable[[int], ReplicationExecutor]
ExecutorSpec = ReplicationExecutor | str | None

_EXECUTOR_FACTORIES: dict[str, ExecutorFactory] = {
    "serial": SerialExecutor,
    "process": ProcessExecutor,
}


def register_executor(name: str, factory: ExecutorFactory) -> None:
    key = name.strip().lower()
    if not key:
        msg = "Executor name must be non-empty"
        raise ValueError(msg)
    _EXECUTOR_FACTORIES[key] = factory


def resolve_executor(spec: ExecutorSpec = None, *, jobs: int = 1) -> ReplicationExecutor:
    """Executor by name or instance; ``None`` picks serial for one job and process otherwise."""
    if isinstance(spec, ReplicationExecutor):
        return spec
    name = (spec or ("serial" if jobs <= 1 else "process")).strip().lower()
    factory = _EXECUTOR_FACTORIES.get(name)
    if factory is None:
        msg = f"Unknown executor '{name}'. Register it with register_executor before use."
        raise ValueError(msg)
    return factory(jobs)


@dataclass(frozen=True)
class ReplicationTask:
    config: SimConfig
    replication: int
    catalogue: Catalogue | None = None


def run_replication(task: ReplicationTask) -> RunMetrics:
    # module level so worker processes can unpickle it
    return simulate(task.config, catalogue=task.catalogue, replication=task.replication).metrics


def run_tasks(tasks: Iterable[ReplicationTask], executor: ExecutorSpec = None, *, jobs: int = 1) -> list[RunMetrics]:
    task_list = list(tasks)
    runner = resolve_executor(executor, jobs=jobs)
    logger.info("Running %d replications on the %s executor", len(task_list), runner.name)
    return runner.map(run_replication, task_list)


def run_replications(
    config: SimConfig,
    n_reps: int,
    *,
    catalogue: Catalogue | None = None,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> list[RunMetrics]:
    tasks = [ReplicationTask(config=config, replication=r, catalogue=catalogue) for r in range(n_reps)]
    return run_tasks(tasks, executor, jobs=jobs)
