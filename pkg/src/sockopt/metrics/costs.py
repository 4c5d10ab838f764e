from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.stats import entropy

if TYPE_CHECKING:
    from sockopt.environment.models import AgentParams, SockInstance
    from sockopt.metrics.models import DayRecord, RunTrace


def social_cost(eta: float, chi: float, z: int, gamma: float) -> float:
    """Z * chi * eta**gamma; exactly 0 when unobserved or perfectly matched."""
    if z == 0 or eta == 0.0:
        return 0.0
    return float(chi * eta**gamma)


def day_reward(record: DayRecord, agent: AgentParams) -> float:
    return -(record.spend + agent.lam * record.eco) - record.social_cost


def diversity(socks: Sequence[SockInstance]) -> float:
    """Shannon entropy (nats) of the design-id distribution."""
    if not socks:
        return 0.0
    _, counts = np.unique([s.design_id for s in socks], return_counts=True)
    if counts.size == 1:
        return 0.0
    return float(entropy(counts))


def dispersion(socks: Sequence[SockInstance]) -> float:
    """Mean pairwise normalised Hamming dissimilarity between socks."""
    if len(socks) < 2:
        return 0.0
    feats = np.array([s.features for s in socks], dtype=np.int64)
    i, j = np.triu_indices(len(socks), 1)
    return float((feats[i] != feats[j]).mean(axis=1).mean())


def diversity_utility(
    socks: Sequence[SockInstance], delta: float, functional: Literal["shannon", "dispersion"] = "shannon"
) -> float:
    if delta == 0.0:
        return 0.0
    value = diversity(socks) if functional == "shannon" else dispersion(socks)
    return delta * value


def reward_from_trace(trace: RunTrace, agent: AgentParams) -> float:
    """Recompute a run's total reward from its retained day records."""
    total = -(trace.initial_spend + agent.lam * trace.initial_eco)
    total += sum(day_reward(record, agent) for record in trace.days)
    return total + sum(trace.diversity_terms.values())
