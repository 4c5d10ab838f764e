from __future__ import annotations

import logging
import pathlib
from collections.abc import Awaitable, Callable, Mapping
from typing import TYPE_CHECKING, Any, Literal, cast

import numpy as np

from sockopt.environment.rng import SHARED, stream_generator
from sockopt.errors import DataError
from sockopt.estimation.bundles import build_bundle_design, bundle_cost_table, reference_regime
from sockopt.estimation.fitting import fit_respondents
from sockopt.estimation.io import format_bundles, format_results, format_trials, load_bundles, load_trials
from sockopt.estimation.summary import summary_statistics
from sockopt.estimation.synthetic import synthesize_respondents
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from sockopt.app.manifest import RunManifest
    from sockopt.app.settings import EstimationConfig, RunSettings, SimulationConfig
    from sockopt.blob.local_fs import LocalFS
    from sockopt.estimation.models import ChoiceData, RespondentFit
    from sockopt.experiments.executor import ExecutorSpec

RESULTS_FILE = "results.csv"
TRIALS_FILE = "trials.csv"
BUNDLES_FILE = "bundles.csv"
TRUTH_FILE = "truth.csv"
SUMMARY_JSON = "summary.json"

TRUTH_HEADER = ["respondent_id", "chi_true", "delta_true", "compliance"]

StudyFile = Literal["trials", "bundles"]
_LOADERS: dict[str, Callable[[str | pathlib.Path], ChoiceData]] = {
    "trials": load_trials,
    "bundles": load_bundles,
}


def _estimates(fits: list[RespondentFit], which: str) -> list[float | None]:
    out: list[float | None] = []
    for f in fits:
        result = getattr(f, which)
        out.append(None if result is None else result.estimate)
    return out


def recovery_error(truth: list[float | None], estimates: list[float | None]) -> float | None:
    """Mean absolute error over respondents that have both a true value and an estimate."""
    pairs = [(t, e) for t, e in zip(truth, estimates, strict=True) if t is not None and e is not None]
    if not pairs:
        return None
    t, e = np.asarray(pairs, dtype=np.float64).T
    return float(np.mean(np.abs(t - e)))


class EstimateMixin:
    if TYPE_CHECKING:
        run_settings: RunSettings
        simulation_config: SimulationConfig
        estimation_config: EstimationConfig
        executor: ExecutorSpec
        jobs: int
        fs: LocalFS
        _run_workflow: Callable[..., Awaitable[WorkflowState]]
        _begin: Callable[..., RunManifest]
        _finalize_step: Callable[[], WorkflowStep]
        _resolve_catalogue_step: Callable[[], WorkflowStep]

    async def estimate_chi(self, path: str | pathlib.Path) -> dict[str, Any]:
        """Fit mismatch sensitivity per respondent from a pairwise-comparison CSV."""
        return await self._estimate_from_file("estimate_chi", "estimate chi", path)

    async def estimate_delta(self, path: str | pathlib.Path) -> dict[str, Any]:
        """Fit diversity preference per respondent from a bundle-choice CSV."""
        return await self._estimate_from_file("estimate_delta", "estimate delta", path)

    async def _estimate_from_file(self, pipeline: str, command: str, path: str | pathlib.Path) -> dict[str, Any]:
        cfg = self.estimation_config
        snapshot = {
            "input": str(path),
            "ridge_chi": cfg.ridge_chi,
            "ridge_delta": cfg.ridge_delta,
            "upper_bound": cfg.upper_bound,
        }
        state: WorkflowState = {
            "input_path": str(path),
            "manifest": self._begin(command, pipeline, snapshot),
        }
        result = await self._run_workflow(pipeline, state)
        return cast(dict[str, Any], result["response"])

    def _fit_step(self) -> WorkflowStep:
        cfg = self.estimation_config
        return WorkflowStep(
            step_id="fit",
            role="estimate",
            handler=self._estimate_fit,
            requires={"data"},
            produces={"fits"},
            capabilities={"estimate", "parallel"},
            config={"ridge_chi": cfg.ridge_chi, "ridge_delta": cfg.ridge_delta, "upper_bound": cfg.upper_bound},
        )

    def _build_estimate_file_workflow(self, kind: StudyFile) -> list[WorkflowStep]:
        return [
            WorkflowStep(
                step_id="load_data",
                role="load",
                handler=self._estimate_loader(kind),
                requires={"input_path"},
                produces={"data", "inputs"},
                capabilities={"io"},
            ),
            self._fit_step(),
            WorkflowStep(
                step_id="write_results",
                role="persist",
                handler=self._estimate_write_results,
                requires={"data", "fits"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_estimate_file_initial_keys() -> set[str]:
        return {"input_path", "manifest"}

    def _estimate_loader(self, kind: StudyFile) -> Callable[[WorkflowState, WorkflowContext], WorkflowState]:
        loader = _LOADERS[kind]

        def handler(state: WorkflowState, context: WorkflowContext) -> WorkflowState:
            path = state["input_path"]
            data = loader(path)
            if not len(data):
                msg = f"{path}: no respondents"
                raise DataError(msg)
            state["data"] = data
            state["inputs"] = {path: self.fs.digest(path)}
            logger.info("Loaded %d respondents from %s", len(data), path)
            return state

        return handler

    def _estimate_fit(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        step_config: Mapping[str, Any] = (context or {}).get("step_config", {})
        cfg = self.estimation_config.model_copy(update=dict(step_config))
        data: ChoiceData = state["data"]
        state["fits"] = fit_respondents(data.respondents, cfg, executor=self.executor, jobs=self.jobs)
        return state

    def _estimate_write_results(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        fits: list[RespondentFit] = state["fits"]
        self.fs.write_text(RESULTS_FILE, format_results(fits))
        state["result"] = {"fits": fits}
        return state

    async def estimate_synthetic(self, respondents: int | None = None) -> dict[str, Any]:
        """Generate a synthetic study with known parameters, fit it and summarise recovery."""
        cfg = self.estimation_config
        n = cfg.respondents if respondents is None else respondents
        snapshot = {
            "estimation": cfg.model_dump(mode="json"),
            "catalogue": self.simulation_config.catalogue.model_dump(mode="json"),
            "respondents": n,
        }
        state: WorkflowState = {
            "config": self.simulation_config,
            "respondents": n,
            "manifest": self._begin("estimate synthetic", "estimate_synthetic", snapshot),
        }
        result = await self._run_workflow("estimate_synthetic", state)
        return cast(dict[str, Any], result["response"])

    def _build_estimate_synthetic_workflow(self) -> list[WorkflowStep]:
        return [
            self._resolve_catalogue_step(),
            WorkflowStep(
                step_id="build_bundles",
                role="design",
                handler=self._estimate_build_bundles,
                requires={"catalogue"},
                produces={"bundle_design", "bundle_costs"},
                capabilities={"simulate", "parallel"},
            ),
            WorkflowStep(
                step_id="synthesize",
                role="design",
                handler=self._estimate_synthesize,
                requires={"respondents", "bundle_design", "bundle_costs"},
                produces={"data"},
                capabilities={"estimate"},
            ),
            self._fit_step(),
            WorkflowStep(
                step_id="summarize",
                role="summarize",
                handler=self._estimate_summarize,
                requires={"data", "fits"},
                produces={"summary"},
                capabilities={"estimate"},
            ),
            WorkflowStep(
                step_id="write_study",
                role="persist",
                handler=self._estimate_write_study,
                requires={"data", "fits", "summary"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_estimate_synthetic_initial_keys() -> set[str]:
        return {"config", "respondents", "manifest"}

    def _estimate_build_bundles(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        cfg = self.estimation_config
        seed = self.run_settings.seed
        design = build_bundle_design(
            state["catalogue"],
            cfg.bundle_size,
            cfg.n_sets,
            cfg.bundles_per_set,
            stream_generator(seed, SHARED, "study"),
            levels=cfg.diversity_levels,
            pool_size=cfg.pool_size,
            bundles_per_level=cfg.bundles_per_level,
        )
        state["bundle_design"] = design
        state["bundle_costs"] = bundle_cost_table(
            design, reference_regime(cfg, seed=seed), cfg.n_sims, executor=self.executor, jobs=self.jobs
        )
        return state

    def _estimate_synthesize(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        cfg = self.estimation_config
        state["data"] = synthesize_respondents(
            cfg.chi_dist,
            cfg.delta_dist,
            state["respondents"],
            cfg,
            seed=self.run_settings.seed,
            bundle_design=state["bundle_design"],
            bundle_costs=state["bundle_costs"],
        )
        return state

    def _estimate_summarize(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        data: ChoiceData = state["data"]
        fits: list[RespondentFit] = state["fits"]
        chi_hat = _estimates(fits, "chi")
        delta_hat = _estimates(fits, "delta")
        summary: dict[str, Any] = {
            "respondents": len(fits),
            "converged": sum(1 for f in fits if f.converged),
            "chi_mae": recovery_error([r.chi_true for r in data.respondents], chi_hat),
            "delta_mae": recovery_error([r.delta_true for r in data.respondents], delta_hat),
            "statistics": None,
        }
        complete = [
            (c, d, r.compliance)
            for c, d, r in zip(chi_hat, delta_hat, data.respondents, strict=True)
            if c is not None and d is not None and r.compliance is not None
        ]
        if complete:
            chi, delta, compliance = (list(col) for col in zip(*complete, strict=True))
            summary["statistics"] = summary_statistics(chi, delta, compliance).model_dump()
        else:
            logger.warning("No respondent has both estimates; summary statistics skipped")
        state["summary"] = summary
        return state

    def _estimate_write_study(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        data: ChoiceData = state["data"]
        fits: list[RespondentFit] = state["fits"]
        self.fs.write_text(TRIALS_FILE, format_trials(data))
        self.fs.write_text(BUNDLES_FILE, format_bundles(data))
        truth = [[r.respondent_id, r.chi_true, r.delta_true, r.compliance] for r in data.respondents]
        self.fs.write_csv(TRUTH_FILE, TRUTH_HEADER, truth)
        self.fs.write_text(RESULTS_FILE, format_results(fits))
        self.fs.write_json(SUMMARY_JSON, state["summary"])
        state["result"] = {"data": data, "fits": fits, "summary": state["summary"]}
        return state
