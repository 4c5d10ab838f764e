from sockopt.metrics.aggregate import aggregate, summarize
from sockopt.metrics.costs import day_reward, dispersion, diversity, diversity_utility, reward_from_trace, social_cost
from sockopt.metrics.models import METRIC_FIELDS, DayRecord, MetricSummary, RunMetrics, RunTrace
from sockopt.metrics.stranded import StrandedCapacity, loss_term, orphan_term, stranded_capacity

__all__ = [
    "METRIC_FIELDS",
    "DayRecord",
    "MetricSummary",
    "RunMetrics",
    "RunTrace",
    "StrandedCapacity",
    "aggregate",
    "day_reward",
    "dispersion",
    "diversity",
    "diversity_utility",
    "loss_term",
    "orphan_term",
    "reward_from_trace",
    "social_cost",
    "stranded_capacity",
    "summarize",
]
