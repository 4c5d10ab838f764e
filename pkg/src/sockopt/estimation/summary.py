from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel
from scipy.stats import skew

from sockopt.errors import InvalidInputError

logger = logging.getLogger(__name__)


class SummaryStatistics(BaseModel):
    n: int
    chi_mean: float
    chi_median: float
    delta_mean: float
    delta_median: float
    chi_skew: float | None
    delta_skew: float | None
    corr_chi_compliance: float | None
    corr_delta_compliance: float | None
    corr_chi_delta: float | None


def pearson(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float | None:
    """Pearson correlation, or None when either vector is constant or shorter than two."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.size < 2 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return None
    return float(np.clip(np.corrcoef(x, y)[0, 1], -1.0, 1.0))


def _skew(x: np.ndarray) -> float | None:
    if x.size < 3 or np.ptp(x) == 0.0:
        return None
    return float(skew(x))


def summary_statistics(
    chi_hat: Sequence[float], delta_hat: Sequence[float], compliance: Sequence[float]
) -> SummaryStatistics:
    chi = np.asarray(chi_hat, dtype=np.float64)
    delta = np.asarray(delta_hat, dtype=np.float64)
    comp = np.asarray(compliance, dtype=np.float64)
    if not chi.size == delta.size == comp.size:
        msg = f"vectors must be aligned, got lengths {chi.size}, {delta.size}, {comp.size}"
        raise InvalidInputError(msg)
    if chi.size == 0:
        msg = "summary statistics need at least one respondent"
        raise InvalidInputError(msg)
    return SummaryStatistics(
        n=int(chi.size),
        chi_mean=float(chi.mean()),
        chi_median=float(np.median(chi)),
        delta_mean=float(delta.mean()),
        delta_median=float(np.median(delta)),
        chi_skew=_skew(chi),
        delta_skew=_skew(delta),
        corr_chi_compliance=pearson(chi, comp),
        corr_delta_compliance=pearson(delta, comp),
        corr_chi_delta=pearson(chi, delta),
    )
