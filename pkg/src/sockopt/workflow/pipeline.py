"""Registered pipelines: validated step chains with a revision history.

Every edit (configuring, inserting, replacing or removing a step) appends a new
revision; ``revision_token`` condenses the current layout into the string run
manifests record, so two outputs can be traced to the exact step list that made them.
"""

from __future__ import annotations

import dataclasses
import hashlib
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import pendulum

from sockopt.workflow.step import WorkflowStep

# what a step may ask of the service
CAPABILITIES = frozenset({"catalogue", "simulate", "parallel", "estimate", "oracle", "io"})

StepEdit = Callable[[list[WorkflowStep], int], None]


def _utc_now() -> str:
    return pendulum.now("UTC").to_iso8601_string()


@dataclass(frozen=True)
class PipelineRevision:
    name: str
    revision: int
    steps: tuple[WorkflowStep, ...]
    created_at: str
    initial_keys: frozenset[str] = frozenset()

    @property
    def digest(self) -> str:
        layout = ";".join(f"{s.step_id}{sorted(s.config.items())}" for s in self.steps)
        return hashlib.sha256(layout.encode("utf-8")).hexdigest()[:8]


def check_chain(
    name: str,
    steps: Sequence[WorkflowStep],
    *,
    initial_keys: Iterable[str] = (),
    capabilities: Iterable[str] = CAPABILITIES,
    terminal_step: str | None = None,
) -> None:
    """Raise ``ValueError`` unless every step's inputs exist by the time it runs."""
    if terminal_step is not None and (not steps or steps[-1].step_id != terminal_step):
        msg = f"Pipeline '{name}' must end with step '{terminal_step}'"
        raise ValueError(msg)

    allowed = set(capabilities)
    produced = set(initial_keys)
    ids: set[str] = set()
    for step in steps:
        if step.step_id in ids:
            msg = f"Pipeline '{name}' repeats step_id '{step.step_id}'"
            raise ValueError(msg)
        ids.add(step.step_id)

        if extra := step.capabilities - allowed:
            msg = f"Step '{step.step_id}' in '{name}' needs unavailable capabilities: {', '.join(sorted(extra))}"
            raise ValueError(msg)
        if absent := step.requires - produced:
            msg = (
                f"Step '{step.step_id}' in '{name}' requires missing state keys: {', '.join(sorted(absent))}; "
                "an earlier step or the initial state must provide them"
            )
            raise ValueError(msg)
        produced |= step.produces


class PipelineManager:
    def __init__(
        self,
        *,
        available_capabilities: Iterable[str] | None = None,
        terminal_step: str | None = None,
    ):
        self.available_capabilities = frozenset(CAPABILITIES if available_capabilities is None else available_capabilities)
        # when set, every pipeline must end with this step and nothing may follow it
        self.terminal_step = terminal_step
        self._history: dict[str, list[PipelineRevision]] = {}

    def register(self, name: str, steps: Iterable[WorkflowStep], *, initial_state_keys: set[str] | None = None) -> None:
        first = PipelineRevision(
            name=name,
            revision=1,
            steps=tuple(steps),
            created_at=_utc_now(),
            initial_keys=frozenset(initial_state_keys or ()),
        )
        self._check(first)
        self._history[name] = [first]

    def names(self) -> list[str]:
        return sorted(self._history)

    def current(self, name: str) -> PipelineRevision:
        try:
            return self._history[name][-1]
        except KeyError:
            msg = f"Pipeline '{name}' not registered"
            raise KeyError(msg) from None

    def build(self, name: str) -> list[WorkflowStep]:
        """Fresh step copies, safe for a single run to mutate."""
        return [step.copy() for step in self.current(name).steps]

    def describe(self, name: str) -> list[str]:
        return [step.step_id for step in self.current(name).steps]

    def config_step(self, name: str, step_id: str, configs: dict[str, object]) -> int:
        def merge(steps: list[WorkflowStep], at: int) -> None:
            steps[at].config = {**steps[at].config, **configs}

        return self._edit(name, step_id, merge)

    def insert_after(self, name: str, target_step_id: str, new_step: WorkflowStep) -> int:
        return self._edit(name, target_step_id, lambda steps, at: steps.insert(at + 1, new_step))

    def insert_before(self, name: str, target_step_id: str, new_step: WorkflowStep) -> int:
        return self._edit(name, target_step_id, lambda steps, at: steps.insert(at, new_step))

    def replace_step(self, name: str, target_step_id: str, new_step: WorkflowStep) -> int:
        def swap(steps: list[WorkflowStep], at: int) -> None:
            steps[at] = new_step

        return self._edit(name, target_step_id, swap)

    def remove_step(self, name: str, target_step_id: str) -> int:
        def drop(steps: list[WorkflowStep], at: int) -> None:
            del steps[at]

        return self._edit(name, target_step_id, drop)

    def revision_token(self, name: str | None = None) -> str:
        """``name:vN:digest`` for one pipeline, or all of them joined by ``|``."""
        revisions = [self.current(n) for n in (self.names() if name is None else [name])]
        return "|".join(f"{rev.name}:v{rev.revision}:{rev.digest}" for rev in revisions)

    def _edit(self, name: str, step_id: str, edit: StepEdit) -> int:
        """Apply ``edit`` to copies of the current steps; keep the result only if it validates."""
        current = self.current(name)
        steps = [step.copy() for step in current.steps]
        position = next((i for i, step in enumerate(steps) if step.step_id == step_id), None)
        if position is None:
            msg = f"Step '{step_id}' not found in pipeline '{name}'"
            raise KeyError(msg)
        edit(steps, position)
        candidate = dataclasses.replace(current, revision=current.revision + 1, steps=tuple(steps), created_at=_utc_now())
        self._check(candidate)
        self._history[name].append(candidate)
        return candidate.revision

    def _check(self, revision: PipelineRevision) -> None:
        check_chain(
            revision.name,
            revision.steps,
            initial_keys=revision.initial_keys,
            capabilities=self.available_capabilities,
            terminal_step=self.terminal_step,
        )
