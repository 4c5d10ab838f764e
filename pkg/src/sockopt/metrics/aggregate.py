from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from sockopt.errors import InvalidInputError
from sockopt.metrics.models import METRIC_FIELDS, MetricSummary, RunMetrics

logger = logging.getLogger(__name__)

Z_95 = 1.96


def summarize(values: Sequence[float]) -> MetricSummary:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        msg = "cannot summarise an empty sample"
        raise InvalidInputError(msg)
    mean = float(arr.mean())
    if arr.size < 2:
        return MetricSummary(mean=mean, half_width=None, n=1)
    sd = float(arr.std(ddof=1))
    return MetricSummary(mean=mean, half_width=Z_95 * sd / float(np.sqrt(arr.size)), n=int(arr.size))


def aggregate(replications: Sequence[RunMetrics]) -> dict[str, MetricSummary]:
    """Mean and 1.96 * s / sqrt(n) half-width per metric; a single replication has no CI."""
    if not replications:
        msg = "aggregate needs at least one replication"
        raise InvalidInputError(msg)
    if len(replications) == 1:
        logger.warning("Single replication: confidence intervals unavailable")
    return {name: summarize([float(getattr(r, name)) for r in replications]) for name in METRIC_FIELDS}
