from __future__ import annotations

import logging
from collections.abc import Awaitable, Callable
from typing import TYPE_CHECKING, Any, cast

from sockopt.app.settings import CatalogueConfig
from sockopt.catalogue.generate import build_catalogue
from sockopt.catalogue.io import format_catalogue
from sockopt.environment.rng import catalogue_generator
from sockopt.environment.simulator import catalogue_for
from sockopt.workflow.step import WorkflowContext, WorkflowState, WorkflowStep

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from sockopt.app.manifest import RunManifest
    from sockopt.app.settings import RunSettings, SimulationConfig
    from sockopt.blob.local_fs import LocalFS

CATALOGUE_FILE = "catalogue.csv"


class CatalogueMixin:
    if TYPE_CHECKING:
        run_settings: RunSettings
        simulation_config: SimulationConfig
        fs: LocalFS
        _run_workflow: Callable[..., Awaitable[WorkflowState]]
        _begin: Callable[..., RunManifest]
        _finalize_step: Callable[[], WorkflowStep]

    async def gen_catalogue(self, spec: CatalogueConfig | dict[str, Any] | None = None) -> dict[str, Any]:
        """Generate a catalogue and write it as ``catalogue.csv``."""
        if spec is None:
            spec = self.simulation_config.catalogue
        elif not isinstance(spec, CatalogueConfig):
            spec = CatalogueConfig.model_validate(spec)
        # a generated file never points back at another file
        spec = spec.model_copy(update={"path": None})
        state: WorkflowState = {
            "spec": spec,
            "manifest": self._begin("gen-catalogue", "gen_catalogue", {"catalogue": spec.model_dump(mode="json")}),
        }
        result = await self._run_workflow("gen_catalogue", state)
        return cast(dict[str, Any], result["response"])

    def _build_gen_catalogue_workflow(self) -> list[WorkflowStep]:
        return [
            WorkflowStep(
                step_id="generate",
                role="generate",
                handler=self._catalogue_generate,
                requires={"spec"},
                produces={"catalogue"},
                capabilities={"catalogue"},
            ),
            WorkflowStep(
                step_id="write_catalogue",
                role="persist",
                handler=self._catalogue_write,
                requires={"spec", "catalogue"},
                produces={"result"},
                capabilities={"io"},
            ),
            self._finalize_step(),
        ]

    @staticmethod
    def _list_gen_catalogue_initial_keys() -> set[str]:
        return {"spec", "manifest"}

    def _catalogue_generate(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        spec: CatalogueConfig = state["spec"]
        rng = catalogue_generator(self.run_settings.seed) if spec.seed is None else None
        state["catalogue"] = build_catalogue(spec, rng)
        return state

    def _catalogue_write(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        spec: CatalogueConfig = state["spec"]
        catalogue = state["catalogue"]
        self.fs.write_text(CATALOGUE_FILE, format_catalogue(catalogue.designs, alpha=spec.alpha))
        logger.info("Catalogue of %d designs written", len(catalogue))
        state["result"] = {"catalogue": catalogue}
        return state

    def _resolve_catalogue_step(self) -> WorkflowStep:
        return WorkflowStep(
            step_id="resolve_catalogue",
            role="load",
            handler=self._resolve_catalogue,
            requires={"config"},
            produces={"catalogue", "inputs"},
            capabilities={"catalogue"},
        )

    def _resolve_catalogue(self, state: WorkflowState, context: WorkflowContext) -> WorkflowState:
        """Load or generate the catalogue a simulation config names; file inputs are digested."""
        config: SimulationConfig = state["config"]
        state["catalogue"] = catalogue_for(config)
        inputs = dict(state.get("inputs") or {})
        if config.catalogue.path is not None:
            inputs[config.catalogue.path] = self.fs.digest(config.catalogue.path)
        state["inputs"] = inputs
        return state
