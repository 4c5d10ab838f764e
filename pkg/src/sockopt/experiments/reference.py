"""Every policy on one reference configuration, paired on seeds."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, Field

from sockopt.environment.simulator import catalogue_for
from sockopt.experiments.executor import ExecutorSpec, ReplicationTask, run_tasks
from sockopt.metrics.aggregate import aggregate
from sockopt.metrics.models import MetricSummary, RunMetrics

if TYPE_CHECKING:
    from sockopt.catalogue.models import Catalogue
    from sockopt.environment.models import SimConfig
    from sockopt.policies.factory import PolicySpec

logger = logging.getLogger(__name__)

# output column -> RunMetrics field
TABLE_COLUMNS: dict[str, str] = {
    "n_socks": "socks_purchased",
    "cost_money": "money",
    "cost_eco": "eco",
    "cost_soc": "social",
    "infeasible_days": "infeasible_days",
    "stranded": "stranded",
}


class PolicySummary(BaseModel):
    policy: str
    summaries: dict[str, MetricSummary]
    replications: list[RunMetrics] = Field(default_factory=list)

    def mean(self, metric: str) -> float:
        return self.summaries[metric].mean


class ReferenceTable(BaseModel):
    rows: list[PolicySummary]
    n_reps: int

    def row(self, policy: str) -> PolicySummary:
        for r in self.rows:
            if r.policy == policy or r.policy.split("[", 1)[0] == policy:
                return r
        msg = f"no row for policy '{policy}'"
        raise KeyError(msg)

    def header(self) -> list[str]:
        cols = ["policy", "n_reps"]
        for name in TABLE_COLUMNS:
            cols += [name, f"{name}_ci"]
        return cols

    def table_rows(self) -> list[dict[str, Any]]:
        out: list[dict[str, Any]] = []
        for r in self.rows:
            record: dict[str, Any] = {"policy": r.policy, "n_reps": self.n_reps}
            for name, metric in TABLE_COLUMNS.items():
                summary = r.summaries[metric]
                record[name] = summary.mean
                record[f"{name}_ci"] = summary.half_width
            out.append(record)
        return out


def replication_rows(policy: str, replications: Sequence[RunMetrics]) -> list[dict[str, Any]]:
    """Per-replication summary columns plus the extra run metrics."""
    rows = []
    for r, metrics in enumerate(replications):
        record: dict[str, Any] = {"policy": policy, "replication": r}
        for name, field in TABLE_COLUMNS.items():
            record[name] = getattr(metrics, field)
        record.update(
            stranded_loss=metrics.stranded_loss,
            stranded_orphan=metrics.stranded_orphan,
            total_wears=metrics.total_wears,
            worn_out=metrics.worn_out,
            lost=metrics.lost,
            reward_total=metrics.reward_total,
            diversity_initial=metrics.diversity_initial,
        )
        rows.append(record)
    return rows


REPLICATION_HEADER = [
    "policy",
    "replication",
    *TABLE_COLUMNS,
    "stranded_loss",
    "stranded_orphan",
    "total_wears",
    "worn_out",
    "lost",
    "reward_total",
    "diversity_initial",
]


def experiment_reference(
    config: SimConfig,
    policies: Sequence[PolicySpec],
    n_reps: int,
    *,
    catalogue: Catalogue | None = None,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> ReferenceTable:
    """Mean and CI of every run metric per policy.

    Replication ``r`` uses the same streams for every policy, so rows are paired.
    """
    catalogue = catalogue or catalogue_for(config)
    tasks = [
        ReplicationTask(config=config.model_copy(update={"policy": spec}), replication=r, catalogue=catalogue)
        for spec in policies
        for r in range(n_reps)
    ]
    results = run_tasks(tasks, executor, jobs=jobs)
    rows = []
    for i, spec in enumerate(policies):
        reps = results[i * n_reps : (i + 1) * n_reps]
        rows.append(PolicySummary(policy=spec.label, summaries=aggregate(reps), replications=reps))
        logger.info("Reference %s: mean infeasible days %.2f", spec.label, rows[-1].mean("infeasible_days"))
    return ReferenceTable(rows=rows, n_reps=n_reps)
