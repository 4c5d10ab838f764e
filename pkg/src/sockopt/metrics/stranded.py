from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from sockopt.policies.pairs import PairTable

if TYPE_CHECKING:
    from collections.abc import Sequence

    from sockopt.environment.models import SockInstance
    from sockopt.metrics.models import RunTrace
    from sockopt.policies.base import PairingPolicy


@dataclass(frozen=True, slots=True)
class StrandedCapacity:
    loss: float
    orphan: float

    @property
    def total(self) -> float:
        return self.loss + self.orphan


def loss_term(lost: Sequence[SockInstance]) -> float:
    return float(sum(s.theta - s.tau for s in lost))


def orphan_term(socks: Sequence[SockInstance], policy: PairingPolicy) -> float:
    """Remaining wears of owned socks that have no partner the policy would accept."""
    if not socks:
        return 0.0
    table = PairTable.build(socks)
    degree = table.degrees(policy.acceptable(table))
    return float(sum(s.theta - s.tau for s, deg in zip(socks, degree, strict=True) if deg == 0))


def stranded_capacity(trace: RunTrace, policy: PairingPolicy) -> StrandedCapacity:
    """Loss term over socks that vanished in the wash plus orphan term over socks owned at the horizon."""
    return StrandedCapacity(loss=loss_term(trace.lost), orphan=orphan_term(trace.final_socks, policy))
