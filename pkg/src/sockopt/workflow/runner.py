from __future__ import annotations

import asyncio
import threading
from collections.abc import Callable, Sequence
from typing import Protocol, runtime_checkable

from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep, run_steps


@runtime_checkable
class WorkflowRunner(Protocol):
    name: str

    async def run(
        self,
        workflow_name: str,
        steps: Sequence[WorkflowStep],
        initial_state: WorkflowState,
        context: WorkflowContext = None,
        *,
        cancel: threading.Event | None = None,
    ) -> WorkflowState: ...


class LocalWorkflowRunner:
    """Runs steps in order in the calling event loop."""

    name = "local"

    async def run(
        self,
        workflow_name: str,
        steps: Sequence[WorkflowStep],
        initial_state: WorkflowState,
        context: WorkflowContext = None,
        *,
        cancel: threading.Event | None = None,
    ) -> WorkflowState:
        return await run_steps(workflow_name, steps, initial_state, context, cancel=cancel)


class ThreadWorkflowRunner(LocalWorkflowRunner):
    """Runs the whole step loop on a worker thread with its own event loop.

    Simulation steps are CPU bound and synchronous; this keeps a host event loop
    free to serve other tasks (or to set the cancel event) while a command runs.
    """

    name = "thread"

    async def run(
        self,
        workflow_name: str,
        steps: Sequence[WorkflowStep],
        initial_state: WorkflowState,
        context: WorkflowContext = None,
        *,
        cancel: threading.Event | None = None,
    ) -> WorkflowState:
        loop = super().run(workflow_name, steps, initial_state, context, cancel=cancel)
        return await asyncio.to_thread(asyncio.run, loop)


RunnerFactory = Callable[[], WorkflowRunner]

_RUNNERS: dict[str, RunnerFactory] = {
    "local": LocalWorkflowRunner,
    "sync": LocalWorkflowRunner,
    "thread": ThreadWorkflowRunner,
}


def _runner_key(name: str) -> str:
    key = name.strip().lower()
    if not key:
        msg = "Workflow runner name must be non-empty"
        raise ValueError(msg)
    return key


def register_workflow_runner(name: str, factory: RunnerFactory) -> None:
    _RUNNERS[_runner_key(name)] = factory


def resolve_workflow_runner(spec: WorkflowRunner | str | None = None) -> WorkflowRunner:
    """Runner from a name, an instance, or None for the local runner."""
    if isinstance(spec, WorkflowRunner):
        return spec
    key = _runner_key(spec or "local")
    try:
        factory = _RUNNERS[key]
    except KeyError:
        msg = f"Unknown workflow runner '{key}' (known: {', '.join(sorted(_RUNNERS))}); register it with register_workflow_runner"
        raise ValueError(msg) from None
    runner = factory()
    if isinstance(runner, WorkflowRunner):
        return runner
    msg = f"Runner factory '{key}' built {type(runner).__name__}, which is not a WorkflowRunner"
    raise TypeError(msg)
