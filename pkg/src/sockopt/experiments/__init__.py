from sockopt.experiments.executor import (
    CancellableExecutor,
    ProcessExecutor,
    ReplicationExecutor,
    ReplicationTask,
    SerialExecutor,
    register_executor,
    resolve_executor,
    run_replications,
    run_tasks,
)
from sockopt.experiments.grid import GRID_HEADER, PANELS, GridCell, GridResult, GridSpec, experiment_grid
from sockopt.experiments.pareto import dominates, knee_point, pareto_front
from sockopt.experiments.reference import (
    REPLICATION_HEADER,
    TABLE_COLUMNS,
    PolicySummary,
    ReferenceTable,
    experiment_reference,
    replication_rows,
)
from sockopt.experiments.tradeoff import (
    TRADEOFF_HEADER,
    FamilyAnalysis,
    TradeoffResult,
    TradeOffPoint,
    analyse_family,
    experiment_tradeoff,
    tradeoff_point,
)

__all__ = [
    "GRID_HEADER",
    "PANELS",
    "REPLICATION_HEADER",
    "TABLE_COLUMNS",
    "TRADEOFF_HEADER",
    "CancellableExecutor",
    "FamilyAnalysis",
    "GridCell",
    "GridResult",
    "GridSpec",
    "PolicySummary",
    "ProcessExecutor",
    "ReferenceTable",
    "ReplicationExecutor",
    "ReplicationTask",
    "SerialExecutor",
    "TradeOffPoint",
    "TradeoffResult",
    "analyse_family",
    "dominates",
    "experiment_grid",
    "experiment_reference",
    "experiment_tradeoff",
    "knee_point",
    "pareto_front",
    "register_executor",
    "replication_rows",
    "resolve_executor",
    "run_replications",
    "run_tasks",
    "tradeoff_point",
]
