"""Per-respondent fits, fanned out over the replication executors."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from sockopt.estimation.chi import fit_chi
from sockopt.estimation.delta import fit_delta
from sockopt.estimation.models import RespondentData, RespondentFit
from sockopt.experiments.executor import ExecutorSpec, resolve_executor

if TYPE_CHECKING:
    from sockopt.app.settings import EstimationConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitTask:
    respondent: RespondentData
    ridge_chi: float
    ridge_delta: float
    upper_bound: float


def fit_respondent(task: FitTask) -> RespondentFit:
    r = task.respondent
    chi = fit_chi(r.trials, task.ridge_chi, upper_bound=task.upper_bound) if r.trials else None
    delta = fit_delta(r.choice_sets, task.ridge_delta, upper_bound=task.upper_bound) if r.choice_sets else None
    return RespondentFit(respondent_id=r.respondent_id, chi=chi, delta=delta)


def fit_respondents(
    respondents: Sequence[RespondentData],
    config: EstimationConfig,
    *,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> list[RespondentFit]:
    tasks = [
        FitTask(
            respondent=r,
            ridge_chi=config.ridge_chi,
            ridge_delta=config.ridge_delta,
            upper_bound=config.upper_bound,
        )
        for r in respondents
    ]
    fits = resolve_executor(executor, jobs=jobs).map(fit_respondent, tasks)
    failed = sum(1 for f in fits if not f.converged)
    if failed:
        logger.warning("%d of %d respondent fits did not converge", failed, len(fits))
    return fits
