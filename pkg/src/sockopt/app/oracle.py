from __future__ import annotations

import logging
import pathlib
from collections.abc import Awaitable, Callable
from dataclasses import asdict
from typing import TYPE_CHECKING, Any, cast

from sockopt.oracle.coverage import brute_force_coverage, sock_design_greedy, verify_coverage_equivalence
from sockopt.oracle.io import Instance, dump_instance, load_instance, solution_payload
from sockopt.oracle.knapsack import knapsack_to_sockplan, solve_knapsack_exact
from sockopt.oracle.models import CoverageInstance, KnapsackInstance
from sockopt.oracle.sockplan import brute_force_sockplan
from sockopt.oracle.verify import GREEDY_RATIO, SweepReport, verify_random_coverage, verify_random_reductions
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from sockopt.app.manifest import RunManifest
    from sockopt.app.settings import OracleConfig, RunSettings
    from sockopt.blob.local_fs import LocalFS

VERIFY_FILE = "verify.json"
COVERAGE_FILE = "coverage.json"
SOLUTION_FILE = "solution.json"


def report_payload(report: SweepReport, what: str, **params: Any) -> dict[str, Any]:
    return {
        **params,
        "trials": report.trials,
        "passed": report.passed,
        "ok": report.ok,
        "summary": report.summary(what),
        "failures": report.failures,
    }


class OracleMixin:
    if TYPE_CHECKING:
        run_settings: RunSettings
        oracle_config: OracleConfig
        fs: LocalFS
        _run_workflow: Callable[..., Awaitable[WorkflowState]]
        _begin: Callable[..., RunManifest]
        _finalize_step: Callable[[], WorkflowStep]

    async def oracle_verify(
        self, *, n_items: int | None = None, trials: int | None = None, seed: int | None = None
    ) -> dict[str, Any]:
        """Random knapsack instances against their Sock-Plan images."""
        cfg = self.oracle_config
        params = {
            "n_items": cfg.random_items if n_items is None else n_items,
            "trials": cfg.random_trials if trials is None else trials,
            "seed": self.run_settings.seed if seed is None else seed,
            "max_value": cfg.max_value,
        }
        return await self._oracle_sweep("oracle_verify", "oracle verify", params)

    async def oracle_coverage(self, *, trials: int | None = None, seed: int | None = None) -> dict[str, Any]:
        """Greedy Sock-Design selections against the exhaustive optimum."""
        cfg = self.oracle_config
        params = {
            "trials": cfg.random_trials if trials is None else trials,
            "seed": self.run_settings.seed if seed is None else seed,
            "variant": cfg.coverage_variant,
        }
        return await self._oracle_sweep("oracle_coverage", "oracle coverage", params)

    async def _oracle_sweep(self, pipeline: str, command: str, params: dict[str, Any]) -> dict[str, Any]:
        state: WorkflowState = {"params": params, "manifest": self._begin(command, pipeline, params)}
        result = await self._run_workflow(pipeline, state)
        return cast(dict[str, Any], result["response"])

    def _sweep_steps(self, handler: Callable[[WorkflowState, WorkflowContext], WorkflowState]) -> list[WorkflowStep]:
        return [
            WorkflowStep(
                step_id="sweep",
                role="verify",
                handler=handler,
                requires={"params"},
                produces={"report", "report_payload"},
                capabilities={"oracle"},
            ),
            WorkflowStep(
                step_id="write_report",
                role="persist",
                handler=self._oracle_write_report,
                requires={"report", "report_payload"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    def _build_oracle_verify_workflow(self) -> list[WorkflowStep]:
        return self._sweep_steps(self._oracle_reduction_sweep)

    def _build_oracle_coverage_workflow(self) -> list[WorkflowStep]:
        return self._sweep_steps(self._oracle_coverage_sweep)

    @staticmethod
    def _list_oracle_sweep_initial_keys() -> set[str]:
        return {"params", "manifest"}

    def _oracle_reduction_sweep(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        p = state["params"]
        report = verify_random_reductions(p["n_items"], p["trials"], p["seed"], max_value=p["max_value"])
        state["report"] = report
        state["report_payload"] = (VERIFY_FILE, report_payload(report, "equivalent", **p))
        return state

    def _oracle_coverage_sweep(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        p = state["params"]
        report = verify_random_coverage(p["trials"], p["seed"], variant=p["variant"])
        state["report"] = report
        state["report_payload"] = (COVERAGE_FILE, report_payload(report, "within ratio", ratio=GREEDY_RATIO, **p))
        return state

    def _oracle_write_report(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        name, payload = state["report_payload"]
        self.fs.write_json(name, payload)
        state["result"] = {"report": state["report"], "summary": payload["summary"]}
        return state

    async def oracle_solve(self, path: str | pathlib.Path) -> dict[str, Any]:
        """Exact solution of one instance file."""
        cfg = self.oracle_config
        snapshot = {"input": str(path), **cfg.model_dump(mode="json")}
        state: WorkflowState = {
            "input_path": str(path),
            "manifest": self._begin("oracle solve", "oracle_solve", snapshot),
        }
        result = await self._run_workflow("oracle_solve", state)
        return cast(dict[str, Any], result["response"])

    def _build_oracle_solve_workflow(self) -> list[WorkflowStep]:
        return [
            WorkflowStep(
                step_id="load_instance",
                role="load",
                handler=self._oracle_load,
                requires={"input_path"},
                produces={"instance", "inputs"},
                capabilities={"io"},
            ),
            WorkflowStep(
                step_id="solve",
                role="solve",
                handler=self._oracle_solve_instance,
                requires={"instance"},
                produces={"solution"},
                capabilities={"oracle"},
            ),
            WorkflowStep(
                step_id="write_solution",
                role="persist",
                handler=self._oracle_write_solution,
                requires={"solution"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_oracle_solve_initial_keys() -> set[str]:
        return {"input_path", "manifest"}

    def _oracle_load(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        path = state["input_path"]
        state["instance"] = load_instance(path)
        state["inputs"] = {path: self.fs.digest(path)}
        return state

    def _oracle_solve_instance(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        inst: Instance = state["instance"]
        cfg = self.oracle_config
        guards = {
            "max_classes": cfg.max_sock_classes,
            "max_socks": cfg.max_socks,
            "max_horizon": cfg.max_horizon,
        }
        payload: dict[str, Any]
        if isinstance(inst, KnapsackInstance):
            optimum = solve_knapsack_exact(inst, max_items=cfg.max_knapsack_items)
            image = knapsack_to_sockplan(inst)
            plan = brute_force_sockplan(image, **guards)
            yes = optimum >= inst.target
            payload = {
                "kind": "knapsack",
                "optimum": optimum,
                "yes_instance": yes,
                "sockplan": solution_payload(plan, image),
                "equivalent": yes == plan.meets(image.threshold),
                "image": dump_instance(image),
            }
        elif isinstance(inst, CoverageInstance):
            greedy = sock_design_greedy(inst, cfg.coverage_variant)
            best = brute_force_coverage(inst, max_sets=cfg.max_coverage_sets)
            payload = {
                "kind": "coverage",
                "greedy": asdict(greedy),
                "optimum": asdict(best),
                "ratio": None if best.value == 0 else greedy.value / best.value,
                "equivalent": verify_coverage_equivalence(inst, max_sets=cfg.max_coverage_sets),
            }
        else:
            payload = {"kind": "sockplan", **solution_payload(brute_force_sockplan(inst, **guards), inst)}
        logger.info("Solved %s instance from %s", payload["kind"], state["input_path"])
        state["solution"] = payload
        return state

    def _oracle_write_solution(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        self.fs.write_json(SOLUTION_FILE, state["solution"])
        state["result"] = {"solution": state["solution"]}
        return state
