"""Tolerance sweep of the mixing policies against a Purist baseline.

Deltas are policy minus Purist on matched replications, so a positive ``delta_soc``
is extra social cost and savings are ``-delta_money`` / ``-delta_eco``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

import numpy as np
from pydantic import BaseModel, Field

from sockopt.app.settings import PolicyConfig
from sockopt.environment.simulator import catalogue_for
from sockopt.errors import InvalidInputError
from sockopt.experiments.executor import ExecutorSpec, ReplicationTask, run_tasks
from sockopt.experiments.pareto import knee_point, pareto_front

if TYPE_CHECKING:
    from sockopt.app.settings import TradeoffConfig
    from sockopt.catalogue.models import Catalogue
    from sockopt.environment.models import SimConfig
    from sockopt.metrics.models import RunMetrics

logger = logging.getLogger(__name__)

TRADEOFF_HEADER = ["policy", "tau_xi", "d_soc", "d_money", "d_eco"]
SIGN_CONVENTION = (
    "d_* = policy cost minus Purist cost on matched seeds; d_soc > 0 is additional social cost; "
    "savings = -d_money (or -d_eco)"
)


class TradeOffPoint(BaseModel):
    policy: str
    tau_xi: float
    delta_soc: float
    delta_money: float
    delta_eco: float
    n: int = Field(ge=1)

    @property
    def savings_money(self) -> float:
        return -self.delta_money

    @property
    def savings_eco(self) -> float:
        return -self.delta_eco

    def row(self) -> dict[str, Any]:
        return {
            "policy": self.policy,
            "tau_xi": self.tau_xi,
            "d_soc": self.delta_soc,
            "d_money": self.delta_money,
            "d_eco": self.delta_eco,
        }


def tradeoff_point(
    policy: str, tau_xi: float, runs: Sequence[RunMetrics], baseline: Sequence[RunMetrics]
) -> TradeOffPoint:
    """Mean paired differences; ``runs[r]`` and ``baseline[r]`` must share replication ``r``."""
    if len(runs) != len(baseline) or not runs:
        msg = f"matched replications required, got {len(runs)} vs {len(baseline)}"
        raise InvalidInputError(msg)

    def diff(field: str) -> float:
        a = np.array([getattr(r, field) for r in runs], dtype=np.float64)
        b = np.array([getattr(r, field) for r in baseline], dtype=np.float64)
        return float(np.mean(a - b))

    return TradeOffPoint(
        policy=policy,
        tau_xi=tau_xi,
        delta_soc=diff("social"),
        delta_money=diff("money"),
        delta_eco=diff("eco"),
        n=len(runs),
    )


class FamilyAnalysis(BaseModel):
    knee_money: float | None = Field(description="tau_xi of the knee point on the money-savings curve.")
    knee_eco: float | None
    pareto_money: list[float]
    pareto_eco: list[float]


def analyse_family(points: Sequence[TradeOffPoint]) -> FamilyAnalysis:
    money = [(p.delta_soc, p.savings_money) for p in points]
    eco = [(p.delta_soc, p.savings_eco) for p in points]
    knee_m, knee_e = knee_point(money), knee_point(eco)
    return FamilyAnalysis(
        knee_money=None if knee_m is None else points[knee_m].tau_xi,
        knee_eco=None if knee_e is None else points[knee_e].tau_xi,
        pareto_money=[points[i].tau_xi for i in pareto_front(money)],
        pareto_eco=[points[i].tau_xi for i in pareto_front(eco)],
    )


class TradeoffResult(BaseModel):
    points: dict[str, list[TradeOffPoint]]
    baseline: str
    n_reps: int

    def rows(self) -> list[dict[str, Any]]:
        return [p.row() for family in self.points.values() for p in family]

    def all_points(self) -> list[TradeOffPoint]:
        return [p for family in self.points.values() for p in family]

    def sidecar(self) -> dict[str, Any]:
        return {
            "baseline": self.baseline,
            "n_reps": self.n_reps,
            "sign_convention": SIGN_CONVENTION,
            "families": {name: analyse_family(pts).model_dump() for name, pts in self.points.items()},
        }


def experiment_tradeoff(
    sweep: TradeoffConfig,
    config: SimConfig,
    n_reps: int | None = None,
    *,
    catalogue: Catalogue | None = None,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> TradeoffResult:
    n = n_reps or sweep.replications
    catalogue = catalogue or catalogue_for(config)
    baseline_spec = PolicyConfig(kind="purist", tau_eta=sweep.baseline_tau_eta)
    specs = [baseline_spec] + [
        PolicyConfig(kind=family, tau_xi=tau) for family in sweep.families for tau in sweep.tau_xi_values
    ]
    tasks = [
        ReplicationTask(config=config.model_copy(update={"policy": spec}), replication=r, catalogue=catalogue)
        for spec in specs
        for r in range(n)
    ]
    logger.info("Trade-off sweep: %d policy settings x %d replications", len(specs), n)
    results = run_tasks(tasks, executor, jobs=jobs)

    baseline = results[:n]
    points: dict[str, list[TradeOffPoint]] = {family: [] for family in sweep.families}
    for i, spec in enumerate(specs[1:], start=1):
        assert spec.tau_xi is not None
        runs = results[i * n : (i + 1) * n]
        points[spec.kind].append(tradeoff_point(spec.kind, spec.tau_xi, runs, baseline))
    return TradeoffResult(points=points, baseline=baseline_spec.label, n_reps=n)
