from __future__ import annotations

import logging
import math
from collections.abc import Sequence

from sockopt.errors import InvalidInputError
from sockopt.estimation.choice import BundleArrays
from sockopt.estimation.models import BundleChoiceSet, EstimationResult
from sockopt.estimation.solver import maximize_concave

logger = logging.getLogger(__name__)


def fit_delta(
    choice_sets: Sequence[BundleChoiceSet], ridge: float = 1e-3, *, upper_bound: float = 1e4
) -> EstimationResult:
    """Penalised multinomial-logit diversity preference over delta >= 0.

    Bundle costs enter the utility with a fixed unit coefficient, so only delta is free.
    """
    if not choice_sets:
        msg = "fit_delta needs at least one choice set"
        raise InvalidInputError(msg)
    if ridge < 0:
        msg = f"ridge must be >= 0, got {ridge}"
        raise InvalidInputError(msg)
    data = BundleArrays.from_sets(choice_sets)

    if not data.identified:
        logger.warning("Every set offers bundles of equal diversity; delta is not identified")
        return EstimationResult(
            estimate=0.0,
            log_likelihood=data.evaluate(0.0, ridge).value,
            converged=True,
            ridge=ridge,
            identified=False,
            n_obs=len(choice_sets),
        )
    if ridge == 0.0 and data.separated:
        logger.warning("Every choice is a most-diverse bundle; unpenalised delta diverges")
        return EstimationResult(
            estimate=upper_bound,
            log_likelihood=data.evaluate(upper_bound).value,
            converged=False,
            ridge=ridge,
            n_obs=len(choice_sets),
        )

    outcome = maximize_concave(lambda x: data.evaluate(x, ridge).gradient, upper_bound=upper_bound)
    at = data.evaluate(outcome.x, ridge)
    return EstimationResult(
        estimate=outcome.x,
        std_error=1.0 / math.sqrt(-at.hessian) if at.hessian < 0 else None,
        log_likelihood=at.value,
        converged=outcome.converged,
        ridge=ridge,
        n_obs=len(choice_sets),
    )
