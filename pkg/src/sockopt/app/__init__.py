from sockopt.app.manifest import MANIFEST_NAME, RunManifest
from sockopt.app.settings import (
    AgentConfig,
    CatalogueConfig,
    EstimationConfig,
    GridConfig,
    OracleConfig,
    ParamDistribution,
    PolicyConfig,
    RunSettings,
    SimulationConfig,
    TradeoffConfig,
    load_run_config,
)

__all__ = [
    "MANIFEST_NAME",
    "AgentConfig",
    "CatalogueConfig",
    "EstimationConfig",
    "GridConfig",
    "OracleConfig",
    "ParamDistribution",
    "PolicyConfig",
    "RunManifest",
    "RunSettings",
    "SimulationConfig",
    "TradeoffConfig",
    "load_run_config",
]
