"""Step pipelines the service runs each command on."""

from sockopt.workflow.pipeline import CAPABILITIES, PipelineManager, PipelineRevision
from sockopt.workflow.runner import (
    LocalWorkflowRunner,
    ThreadWorkflowRunner,
    WorkflowRunner,
    register_workflow_runner,
    resolve_workflow_runner,
)
from sockopt.workflow.step import (
    CANCEL_KEY,
    WorkflowContext,
    WorkflowState,
    WorkflowStep,
    cancel_requested,
    run_steps,
)

__all__ = [
    "CANCEL_KEY",
    "CAPABILITIES",
    "LocalWorkflowRunner",
    "PipelineManager",
    "PipelineRevision",
    "ThreadWorkflowRunner",
    "WorkflowContext",
    "WorkflowRunner",
    "WorkflowState",
    "WorkflowStep",
    "cancel_requested",
    "register_workflow_runner",
    "resolve_workflow_runner",
    "run_steps",
]
