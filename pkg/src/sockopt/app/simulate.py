from __future__ import annotations

import logging
from collections.abc import Awaitable, Callable, Sequence
from typing import TYPE_CHECKING, Any, cast

from sockopt.app.settings import PolicyConfig, flatten_config
from sockopt.environment.simulator import simulate
from sockopt.experiments.reference import REPLICATION_HEADER, ReferenceTable, experiment_reference, replication_rows
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from sockopt.app.manifest import RunManifest
    from sockopt.app.settings import RunSettings, SimulationConfig
    from sockopt.blob.local_fs import LocalFS
    from sockopt.experiments.executor import ExecutorSpec
    from sockopt.metrics.models import DayRecord

METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.csv"
TRACE_FILE = "trace.csv"

TRACE_HEADER = [
    "policy",
    "replication",
    "day",
    "Z",
    "feasible",
    "sock1",
    "sock2",
    "eta",
    "soc_cost",
    "washed",
    "lost",
    "purchased",
    "spend",
    "eco",
    "worn_out",
]


def trace_row(policy: str, replication: int, record: DayRecord) -> list[Any]:
    a, b = record.pair if record.pair is not None else (None, None)
    return [
        policy,
        replication,
        record.day,
        record.z,
        record.feasible,
        a,
        b,
        record.eta,
        record.social_cost,
        record.washed,
        record.lost,
        " ".join(str(i) for i in record.purchased),
        record.spend,
        record.eco,
        record.worn_out,
    ]


class SimulateMixin:
    if TYPE_CHECKING:
        run_settings: RunSettings
        simulation_config: SimulationConfig
        executor: ExecutorSpec
        jobs: int
        fs: LocalFS
        _run_workflow: Callable[..., Awaitable[WorkflowState]]
        _begin: Callable[..., RunManifest]
        _finalize_step: Callable[[], WorkflowStep]
        _resolve_catalogue_step: Callable[[], WorkflowStep]

    async def run_simulation(
        self,
        policies: Sequence[PolicyConfig] | None = None,
        *,
        reps: int | None = None,
        trace: bool | None = None,
    ) -> dict[str, Any]:
        """Replicate the configured run under each policy; replication ``r`` shares its streams across policies."""
        specs = list(policies) if policies else [self.simulation_config.policy]
        n_reps = reps if reps is not None else self.run_settings.reps
        keep_trace = self.run_settings.trace if trace is None else trace
        snapshot = {
            **flatten_config(self.simulation_config),
            "policies": [spec.label for spec in specs],
            "reps": n_reps,
            "trace": keep_trace,
        }
        state: WorkflowState = {
            "config": self.simulation_config,
            "policies": specs,
            "reps": n_reps,
            "trace": keep_trace,
            "manifest": self._begin("simulate", "simulate", snapshot),
        }
        result = await self._run_workflow("simulate", state)
        return cast(dict[str, Any], result["response"])

    def _build_simulate_workflow(self) -> list[WorkflowStep]:
        return [
            self._resolve_catalogue_step(),
            WorkflowStep(
                step_id="replicate",
                role="simulate",
                handler=self._simulate_replicate,
                requires={"config", "catalogue", "policies", "reps"},
                produces={"table"},
                capabilities={"simulate", "parallel"},
            ),
            WorkflowStep(
                step_id="record_trace",
                role="simulate",
                handler=self._simulate_record_trace,
                requires={"config", "catalogue", "policies", "reps", "trace"},
                produces={"trace_rows"},
                capabilities={"simulate"},
            ),
            WorkflowStep(
                step_id="write_metrics",
                role="persist",
                handler=self._simulate_write,
                requires={"table", "trace_rows"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_simulate_initial_keys() -> set[str]:
        return {"config", "policies", "reps", "trace", "manifest"}

    def _simulate_replicate(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        state["table"] = experiment_reference(
            state["config"],
            state["policies"],
            state["reps"],
            catalogue=state["catalogue"],
            executor=self.executor,
            jobs=self.jobs,
        )
        return state

    def _simulate_record_trace(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        rows: list[list[Any]] = []
        if state["trace"]:
            config: SimulationConfig = state["config"]
            for spec in state["policies"]:
                run_config = config.model_copy(update={"policy": spec})
                for r in range(state["reps"]):
                    outcome = simulate(run_config, catalogue=state["catalogue"], replication=r, keep_days=True)
                    rows.extend(trace_row(spec.label, r, record) for record in outcome.trace.days)
        state["trace_rows"] = rows
        return state

    def _simulate_write(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        table: ReferenceTable = state["table"]
        metrics = [row for summary in table.rows for row in replication_rows(summary.policy, summary.replications)]
        self.fs.write_csv(METRICS_FILE, REPLICATION_HEADER, metrics)
        self.fs.write_csv(SUMMARY_FILE, table.header(), table.table_rows())
        if state["trace_rows"]:
            self.fs.write_csv(TRACE_FILE, TRACE_HEADER, state["trace_rows"])
        state["result"] = {"table": table}
        return state
