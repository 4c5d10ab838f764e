"""Maximiser for one-dimensional concave objectives on [0, upper_bound]."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

from scipy.optimize import brentq

logger = logging.getLogger(__name__)

GTOL = 1e-8
XTOL = 1e-10


@dataclass(frozen=True)
class SolverOutcome:
    x: float
    converged: bool
    iterations: int = 0


def maximize_concave(
    gradient: Callable[[float], float],
    *,
    upper_bound: float,
    start: float = 1.0,
    gtol: float = GTOL,
    xtol: float = XTOL,
) -> SolverOutcome:
    """Root of the gradient, bracketed by doubling from ``start``.

    A gradient that is not positive at 0 puts the maximum on the boundary. If the
    gradient is still positive at ``upper_bound`` the result is the bound with
    ``converged=False``.
    """
    if gradient(0.0) <= gtol:
        return SolverOutcome(x=0.0, converged=True)

    lo, hi = 0.0, min(start, upper_bound)
    while gradient(hi) > 0.0:
        if hi >= upper_bound:
            logger.warning("Gradient still positive at the upper bound %g", upper_bound)
            return SolverOutcome(x=upper_bound, converged=False)
        lo, hi = hi, min(2.0 * hi, upper_bound)

    root, info = brentq(gradient, lo, hi, xtol=xtol, full_output=True, disp=False)
    # brentq stops once the bracket is narrower than xtol
    converged = bool(info.converged) or abs(gradient(root)) < gtol
    return SolverOutcome(x=float(root), converged=converged, iterations=int(info.iterations))
