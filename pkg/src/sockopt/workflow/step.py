"""Steps and the sequential loop every sockopt command runs on.

A command's state is a plain dict. Each step names the keys it reads
(``requires``) and the keys it leaves behind (``produces``); both are checked
here at run time and once more by the pipeline manager at registration.
"""

from __future__ import annotations

import dataclasses
import inspect
import logging
import threading
import time
from collections.abc import Awaitable, Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from sockopt.errors import RunCancelledError

logger = logging.getLogger(__name__)

WorkflowState = dict[str, Any]
WorkflowContext = Mapping[str, Any] | None
WorkflowHandler = Callable[[WorkflowState, WorkflowContext], Awaitable[WorkflowState] | WorkflowState]

# context key under which a running command exposes its cancel event to handlers
CANCEL_KEY = "cancel_event"


@dataclass
class WorkflowStep:
    step_id: str
    role: str
    handler: WorkflowHandler
    description: str = ""
    requires: set[str] = field(default_factory=set)
    produces: set[str] = field(default_factory=set)
    capabilities: set[str] = field(default_factory=set)
    config: dict[str, Any] = field(default_factory=dict)

    def copy(self) -> WorkflowStep:
        """Copy with fresh key sets and config; the handler is shared."""
        return dataclasses.replace(
            self,
            requires=set(self.requires),
            produces=set(self.produces),
            capabilities=set(self.capabilities),
            config=dict(self.config),
        )

    async def run(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        out = self.handler(state, context)
        if inspect.isawaitable(out):
            out = await out
        if not isinstance(out, Mapping):
            msg = f"Step '{self.step_id}' returned {type(out).__name__}; handlers must return a mapping"
            raise TypeError(msg)
        if absent := self.produces.difference(out):
            msg = f"Step '{self.step_id}' did not produce: {', '.join(sorted(absent))}"
            raise KeyError(msg)
        return dict(out)


def cancel_requested(context: WorkflowContext) -> bool:
    """True once the command that owns ``context`` has been asked to stop."""
    event = (context or {}).get(CANCEL_KEY)
    return isinstance(event, threading.Event) and event.is_set()


def _step_context(shared: Mapping[str, Any], step: WorkflowStep) -> dict[str, Any]:
    ctx = {**shared, "step_id": step.step_id}
    if step.config:
        ctx["step_config"] = dict(step.config)
    return ctx


async def run_steps(
    name: str,
    steps: Sequence[WorkflowStep],
    initial_state: WorkflowState,
    context: WorkflowContext = None,
    *,
    cancel: threading.Event | None = None,
) -> WorkflowState:
    """Run ``steps`` in order; a set ``cancel`` event stops the loop before the next step."""
    shared = {**(context or {}), **({CANCEL_KEY: cancel} if cancel is not None else {})}
    state = dict(initial_state)
    for step in steps:
        if cancel is not None and cancel.is_set():
            msg = f"Workflow '{name}' cancelled before step '{step.step_id}'"
            raise RunCancelledError(msg)
        if absent := step.requires - state.keys():
            msg = f"Workflow '{name}' cannot start step '{step.step_id}' without: {', '.join(sorted(absent))}"
            raise KeyError(msg)

        started = time.perf_counter()
        state = await step.run(state, _step_context(shared, step))
        logger.debug("%s/%s (%s) took %.3fs", name, step.step_id, step.role, time.perf_counter() - started)
    return state
