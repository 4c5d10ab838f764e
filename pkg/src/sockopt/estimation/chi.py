from __future__ import annotations

import logging
import math
from collections.abc import Sequence

from sockopt.errors import InvalidInputError
from sockopt.estimation.choice import ComparisonArrays
from sockopt.estimation.models import ComparisonTrial, EstimationResult
from sockopt.estimation.solver import maximize_concave

logger = logging.getLogger(__name__)


def fit_chi(trials: Sequence[ComparisonTrial], ridge: float = 1e-3, *, upper_bound: float = 1e4) -> EstimationResult:
    """Penalised maximum-likelihood mismatch sensitivity over chi >= 0."""
    if not trials:
        msg = "fit_chi needs at least one trial"
        raise InvalidInputError(msg)
    if ridge < 0:
        msg = f"ridge must be >= 0, got {ridge}"
        raise InvalidInputError(msg)
    data = ComparisonArrays.from_trials(trials)

    if not data.informative:
        logger.warning("All %d trials show equally severe pairs; chi is not identified", len(trials))
        return EstimationResult(
            estimate=0.0,
            log_likelihood=data.evaluate(0.0, ridge).value,
            converged=True,
            ridge=ridge,
            identified=False,
            n_obs=len(trials),
        )
    if ridge == 0.0 and data.separated:
        logger.warning("Choices always favour the less severe pair; unpenalised chi diverges")
        return EstimationResult(
            estimate=upper_bound,
            log_likelihood=data.evaluate(upper_bound).value,
            converged=False,
            ridge=ridge,
            n_obs=len(trials),
        )

    outcome = maximize_concave(lambda c: data.evaluate(c, ridge).gradient, upper_bound=upper_bound)
    at = data.evaluate(outcome.x, ridge)
    return EstimationResult(
        estimate=outcome.x,
        std_error=1.0 / math.sqrt(-at.hessian) if at.hessian < 0 else None,
        log_likelihood=at.value,
        converged=outcome.converged,
        ridge=ridge,
        n_obs=len(trials),
    )
