"""Loss-and-wear stress grid over (theta, d) for each policy."""

from __future__ import annotations

import logging
from itertools import product
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel
from scipy.stats import spearmanr

from sockopt.app.settings import GridConfig
from sockopt.environment.simulator import catalogue_for
from sockopt.experiments.executor import ExecutorSpec, ReplicationTask, run_tasks
from sockopt.metrics.aggregate import aggregate
from sockopt.metrics.models import MetricSummary

if TYPE_CHECKING:
    from sockopt.catalogue.models import Catalogue

logger = logging.getLogger(__name__)

GridSpec = GridConfig


GRID_HEADER = [
    "theta",
    "d",
    "policy",
    "n_socks",
    "infeasible_days",
    "stranded",
    "stranded_loss",
    "stranded_orphan",
    "cost_money",
    "cost_soc",
]

# panel name -> metric; one CSV per (panel, theta)
PANELS: dict[str, str] = {
    "socks": "socks_purchased",
    "infeasible": "infeasible_days",
    "stranded": "stranded",
}


class GridCell(BaseModel):
    theta: int
    d: float
    policy: str
    summaries: dict[str, MetricSummary]
    max_money: float

    def mean(self, metric: str) -> float:
        return self.summaries[metric].mean

    def row(self) -> dict[str, Any]:
        return {
            "theta": self.theta,
            "d": self.d,
            "policy": self.policy,
            "n_socks": self.mean("socks_purchased"),
            "infeasible_days": self.mean("infeasible_days"),
            "stranded": self.mean("stranded"),
            "stranded_loss": self.mean("stranded_loss"),
            "stranded_orphan": self.mean("stranded_orphan"),
            "cost_money": self.mean("money"),
            "cost_soc": self.mean("social"),
        }


class GridResult(BaseModel):
    cells: list[GridCell]
    d_values: tuple[float, ...]
    theta_values: tuple[int, ...]
    policies: tuple[str, ...]
    replenishment: bool

    def cell(self, theta: int, d: float, policy: str) -> GridCell:
        for c in self.cells:
            if c.theta == theta and c.d == d and policy in (c.policy, c.policy.split("[", 1)[0]):
                return c
        msg = f"no grid cell for theta={theta}, d={d}, policy={policy}"
        raise KeyError(msg)

    def rows(self) -> list[dict[str, Any]]:
        return [c.row() for c in self.cells]

    def panel(self, name: str, theta: int) -> tuple[list[str], list[list[Any]]]:
        """Plot series for one panel at one wear limit: a d column then one column per policy."""
        metric = PANELS[name]
        header = ["d", *self.policies]
        rows = []
        for d in self.d_values:
            rows.append([d, *(self.cell(theta, d, p).mean(metric) for p in self.policies)])
        return header, rows

    def trend(self, policy: str, theta: int, metric: str = "infeasible_days") -> float:
        """Spearman correlation between d and the cell means; NaN when either side is constant."""
        means = [self.cell(theta, d, policy).mean(metric) for d in self.d_values]
        if len(self.d_values) < 2:
            return float("nan")
        return float(spearmanr(self.d_values, means).statistic)


def experiment_grid(
    grid: GridConfig,
    *,
    catalogue: Catalogue | None = None,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> GridResult:
    """Monte Carlo means per (theta, d, policy) cell; every cell shares the catalogue and seeds."""
    base = grid.base
    catalogue = catalogue or catalogue_for(base)
    n = grid.replications
    keys = list(product(grid.theta_values, grid.d_values, grid.policies))
    tasks = [
        ReplicationTask(
            config=base.model_copy(update={"theta": theta, "d": d, "policy": spec}),
            replication=r,
            catalogue=catalogue,
        )
        for theta, d, spec in keys
        for r in range(n)
    ]
    logger.info("Grid: %d cells x %d replications", len(keys), n)
    results = run_tasks(tasks, executor, jobs=jobs)

    cells = []
    for i, (theta, d, spec) in enumerate(keys):
        reps = results[i * n : (i + 1) * n]
        cells.append(
            GridCell(
                theta=theta,
                d=d,
                policy=spec.label,
                summaries=aggregate(reps),
                max_money=max(r.money for r in reps),
            )
        )
    return GridResult(
        cells=cells,
        d_values=tuple(grid.d_values),
        theta_values=tuple(grid.theta_values),
        policies=tuple(spec.label for spec in grid.policies),
        replenishment=base.replenishment,
    )
