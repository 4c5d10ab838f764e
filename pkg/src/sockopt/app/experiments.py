from __future__ import annotations

import logging
from collections.abc import Awaitable, Callable
from typing import TYPE_CHECKING, Any, cast

from sockopt.app.settings import GridConfig, TradeoffConfig, flatten_config
from sockopt.experiments.grid import GRID_HEADER, PANELS, GridResult, experiment_grid
from sockopt.experiments.tradeoff import TRADEOFF_HEADER, TradeoffResult, experiment_tradeoff
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from sockopt.app.manifest import RunManifest
    from sockopt.app.settings import RunSettings, SimulationConfig
    from sockopt.blob.local_fs import LocalFS
    from sockopt.experiments.executor import ExecutorSpec

GRID_FILE = "grid.csv"
TRADEOFF_FILE = "tradeoff.csv"
TRADEOFF_SIDECAR = "tradeoff.json"


def panel_file(name: str, theta: int) -> str:
    return f"panel_{name}_theta{theta}.csv"


class ExperimentMixin:
    if TYPE_CHECKING:
        run_settings: RunSettings
        simulation_config: SimulationConfig
        grid_config: GridConfig
        tradeoff_config: TradeoffConfig
        executor: ExecutorSpec
        jobs: int
        fs: LocalFS
        _run_workflow: Callable[..., Awaitable[WorkflowState]]
        _begin: Callable[..., RunManifest]
        _finalize_step: Callable[[], WorkflowStep]
        _resolve_catalogue_step: Callable[[], WorkflowStep]

    async def run_sweep(self, grid: GridConfig | None = None, *, reps: int | None = None) -> dict[str, Any]:
        """The (theta, d, policy) grid around the configured run; writes the long table and panel series."""
        grid = grid or self.grid_config
        payload = grid.model_dump()
        payload["base"] = self.simulation_config.model_dump()
        if reps is not None:
            payload["replications"] = reps
        grid = GridConfig.model_validate(payload)
        snapshot = {
            **flatten_config(grid.base),
            "d_values": list(grid.d_values),
            "theta_values": list(grid.theta_values),
            "policies": [spec.label for spec in grid.policies],
            "reps": grid.replications,
        }
        state: WorkflowState = {
            "config": grid.base,
            "grid": grid,
            "manifest": self._begin("sweep", "sweep", snapshot),
        }
        result = await self._run_workflow("sweep", state)
        return cast(dict[str, Any], result["response"])

    def _build_sweep_workflow(self) -> list[WorkflowStep]:
        return [
            self._resolve_catalogue_step(),
            WorkflowStep(
                step_id="run_grid",
                role="simulate",
                handler=self._sweep_run_grid,
                requires={"grid", "catalogue"},
                produces={"grid_result"},
                capabilities={"simulate", "parallel"},
            ),
            WorkflowStep(
                step_id="write_grid",
                role="persist",
                handler=self._sweep_write,
                requires={"grid_result"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_sweep_initial_keys() -> set[str]:
        return {"config", "grid", "manifest"}

    def _sweep_run_grid(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        state["grid_result"] = experiment_grid(
            state["grid"], catalogue=state["catalogue"], executor=self.executor, jobs=self.jobs
        )
        return state

    def _sweep_write(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        grid: GridResult = state["grid_result"]
        self.fs.write_csv(GRID_FILE, GRID_HEADER, grid.rows())
        for name in PANELS:
            for theta in grid.theta_values:
                header, rows = grid.panel(name, theta)
                self.fs.write_csv(panel_file(name, theta), header, rows)
        if not grid.replenishment:
            logger.info("Grid ran without replenishment; infeasible days include stock-outs")
        state["result"] = {"grid": grid}
        return state

    async def run_tradeoff(self, sweep: TradeoffConfig | None = None, *, reps: int | None = None) -> dict[str, Any]:
        """Mixing-policy thresholds against the Purist baseline, with knee and Pareto sidecar."""
        sweep = sweep or self.tradeoff_config
        n_reps = reps if reps is not None else sweep.replications
        snapshot = {
            **flatten_config(self.simulation_config),
            "tau_xi_values": list(sweep.tau_xi_values),
            "families": list(sweep.families),
            "baseline_tau_eta": sweep.baseline_tau_eta,
            "reps": n_reps,
        }
        state: WorkflowState = {
            "config": self.simulation_config,
            "sweep": sweep,
            "reps": n_reps,
            "manifest": self._begin("tradeoff", "tradeoff", snapshot),
        }
        result = await self._run_workflow("tradeoff", state)
        return cast(dict[str, Any], result["response"])

    def _build_tradeoff_workflow(self) -> list[WorkflowStep]:
        return [
            self._resolve_catalogue_step(),
            WorkflowStep(
                step_id="run_tradeoff",
                role="simulate",
                handler=self._tradeoff_run,
                requires={"config", "sweep", "reps", "catalogue"},
                produces={"tradeoff"},
                capabilities={"simulate", "parallel"},
            ),
            WorkflowStep(
                step_id="write_tradeoff",
                role="persist",
                handler=self._tradeoff_write,
                requires={"tradeoff"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_tradeoff_initial_keys() -> set[str]:
        return {"config", "sweep", "reps", "manifest"}

    def _tradeoff_run(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        state["tradeoff"] = experiment_tradeoff(
            state["sweep"],
            state["config"],
            state["reps"],
            catalogue=state["catalogue"],
            executor=self.executor,
            jobs=self.jobs,
        )
        return state

    def _tradeoff_write(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        tradeoff: TradeoffResult = state["tradeoff"]
        self.fs.write_csv(TRADEOFF_FILE, TRADEOFF_HEADER, tradeoff.rows())
        self.fs.write_json(TRADEOFF_SIDECAR, tradeoff.sidecar())
        state["result"] = {"tradeoff": tradeoff}
        return state
