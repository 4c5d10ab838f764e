from __future__ import annotations

import asyncio
import logging
import threading
from collections.abc import Mapping
from typing import Any, TypeVar

from pydantic import BaseModel

from sockopt.app.catalogue import CatalogueMixin
from sockopt.app.estimate import EstimateMixin
from sockopt.app.experiments import ExperimentMixin
from sockopt.app.manifest import MANIFEST_NAME, RunManifest
from sockopt.app.oracle import OracleMixin
from sockopt.app.settings import (
    EstimationConfig,
    GridConfig,
    OracleConfig,
    RunSettings,
    SimulationConfig,
    TradeoffConfig,
)
from sockopt.app.simulate import SimulateMixin
from sockopt.blob.local_fs import LocalFS
from sockopt.experiments.executor import CancellableExecutor, ExecutorSpec, resolve_executor
from sockopt.workflow.pipeline import PipelineManager
from sockopt.workflow.runner import WorkflowRunner, resolve_workflow_runner
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

# left next to the outputs of a command that stopped before its manifest was written
PARTIAL_NAME = "PARTIAL.json"

TConfigModel = TypeVar("TConfigModel", bound=BaseModel)


class SockService(CatalogueMixin, SimulateMixin, ExperimentMixin, EstimateMixin, OracleMixin):
    """One object per output directory; every public command runs a registered pipeline."""

    def __init__(
        self,
        *,
        run_settings: RunSettings | dict[str, Any],
        simulation_config: SimulationConfig | dict[str, Any] | None = None,
        grid_config: GridConfig | dict[str, Any] | None = None,
        tradeoff_config: TradeoffConfig | dict[str, Any] | None = None,
        estimation_config: EstimationConfig | dict[str, Any] | None = None,
        oracle_config: OracleConfig | dict[str, Any] | None = None,
        workflow_runner: WorkflowRunner | str | None = None,
        executor: ExecutorSpec = None,
    ):
        self.run_settings = self._validate_config(run_settings, RunSettings)
        simulation = self._validate_config(simulation_config, SimulationConfig)
        # the master seed always comes from the run settings
        self.simulation_config = simulation.model_copy(update={"seed": self.run_settings.seed})
        self.grid_config = self._validate_config(grid_config, GridConfig)
        self.tradeoff_config = self._validate_config(tradeoff_config, TradeoffConfig)
        self.estimation_config = self._validate_config(estimation_config, EstimationConfig)
        self.oracle_config = self._validate_config(oracle_config, OracleConfig)

        self.fs = LocalFS(self.run_settings.out_dir)
        self._cancel = threading.Event()
        self.executor = CancellableExecutor(resolve_executor(executor, jobs=self.jobs), self._cancel)
        self._workflow_runner = resolve_workflow_runner(workflow_runner)
        self._pipelines = PipelineManager(terminal_step="write_manifest")
        self._register_pipelines()

    def cancel(self) -> None:
        """Ask the running command to stop at the next step or replication batch."""
        self._cancel.set()

    @property
    def jobs(self) -> int:
        return self.run_settings.jobs

    @staticmethod
    def _validate_config(
        config: Mapping[str, Any] | BaseModel | None,
        model_type: type[TConfigModel],
    ) -> TConfigModel:
        if isinstance(config, model_type):
            return config
        if config is None:
            return model_type()
        return model_type.model_validate(config)

    def _register_pipelines(self) -> None:
        pipelines = {
            "gen_catalogue": (self._build_gen_catalogue_workflow(), self._list_gen_catalogue_initial_keys()),
            "simulate": (self._build_simulate_workflow(), self._list_simulate_initial_keys()),
            "sweep": (self._build_sweep_workflow(), self._list_sweep_initial_keys()),
            "tradeoff": (self._build_tradeoff_workflow(), self._list_tradeoff_initial_keys()),
            "estimate_chi": (self._build_estimate_file_workflow("trials"), self._list_estimate_file_initial_keys()),
            "estimate_delta": (self._build_estimate_file_workflow("bundles"), self._list_estimate_file_initial_keys()),
            "estimate_synthetic": (self._build_estimate_synthetic_workflow(), self._list_estimate_synthetic_initial_keys()),
            "oracle_verify": (self._build_oracle_verify_workflow(), self._list_oracle_sweep_initial_keys()),
            "oracle_coverage": (self._build_oracle_coverage_workflow(), self._list_oracle_sweep_initial_keys()),
            "oracle_solve": (self._build_oracle_solve_workflow(), self._list_oracle_solve_initial_keys()),
        }
        for name, (steps, initial_keys) in pipelines.items():
            self._pipelines.register(name, steps, initial_state_keys=initial_keys)

    def _begin(self, command: str, pipeline: str, config: Mapping[str, Any]) -> RunManifest:
        """Reset the output bookkeeping and open the manifest of a new command."""
        self.fs.written.clear()
        self._cancel.clear()
        return RunManifest.start(
            command,
            self.run_settings.seed,
            config,
            pipeline=self._pipelines.revision_token(pipeline),
        )

    def _finalize_step(self) -> WorkflowStep:
        return WorkflowStep(
            step_id="write_manifest",
            role="finalize",
            handler=self._write_manifest,
            requires={"manifest", "result"},
            produces={"response"},
            capabilities={"io"},
        )

    def _write_manifest(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        self.fs.remove(PARTIAL_NAME)
        outputs = dict(self.fs.written)
        manifest: RunManifest = state["manifest"].finish(outputs, state.get("inputs"))
        self.fs.write_json(MANIFEST_NAME, manifest.model_dump(mode="json"))
        logger.info("%s wrote %d files to %s", manifest.command, len(outputs), self.fs.base)
        state["response"] = {"manifest": manifest, "outputs": sorted(outputs), **state["result"]}
        return state

    async def _run_workflow(self, workflow_name: str, initial_state: WorkflowState) -> WorkflowState:
        steps = self._pipelines.build(workflow_name)
        runner_context = {"workflow_name": workflow_name}
        try:
            return await self._workflow_runner.run(
                workflow_name, steps, initial_state, runner_context, cancel=self._cancel
            )
        except BaseException as exc:
            if self.fs.written and MANIFEST_NAME not in self.fs.written:
                self._mark_partial(workflow_name, exc)
            raise

    def _mark_partial(self, workflow_name: str, exc: BaseException) -> None:
        outputs = sorted(self.fs.written)
        self.fs.write_json(
            PARTIAL_NAME,
            {"pipeline": workflow_name, "outputs": outputs, "error": f"{type(exc).__name__}: {exc}"},
        )
        logger.warning("%s stopped early; %d files in %s are partial", workflow_name, len(outputs), self.fs.base)

    def run_command(self, coro: Any) -> dict[str, Any]:
        """Drive one command coroutine to completion from synchronous code."""
        return asyncio.run(coro)

    def configure_pipeline(self, *, step_id: str, configs: Mapping[str, Any], pipeline: str) -> int:
        return self._pipelines.config_step(pipeline, step_id, dict(configs))

    def insert_step_after(self, *, target_step_id: str, new_step: WorkflowStep, pipeline: str) -> int:
        return self._pipelines.insert_after(pipeline, target_step_id, new_step)

    def insert_step_before(self, *, target_step_id: str, new_step: WorkflowStep, pipeline: str) -> int:
        return self._pipelines.insert_before(pipeline, target_step_id, new_step)

    def replace_step(self, *, target_step_id: str, new_step: WorkflowStep, pipeline: str) -> int:
        return self._pipelines.replace_step(pipeline, target_step_id, new_step)

    def remove_step(self, *, target_step_id: str, pipeline: str) -> int:
        return self._pipelines.remove_step(pipeline, target_step_id)

    def describe_pipeline(self, pipeline: str) -> list[str]:
        return self._pipelines.describe(pipeline)
