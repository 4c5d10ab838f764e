from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from sockopt.policies.base import PairingPolicy
from sockopt.policies.pairs import PairChoice, PairTable

if TYPE_CHECKING:
    from sockopt.environment.models import AgentParams, SockInstance


def select_exposure_aware(inventory: Sequence[SockInstance], agent: AgentParams) -> PairChoice:
    return ExposureAwarePolicy().select_from(PairTable.build(inventory), agent)


class ExposureAwarePolicy(PairingPolicy):
    """Greedy on xi minus the expected social penalty, using rho as the exposure estimate."""

    name = "exposure_aware"

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        if agent is None:
            msg = "exposure-aware selection needs agent parameters"
            raise ValueError(msg)
        score = table.xi - agent.rho * agent.chi * table.eta**agent.gamma
        return table.choice(table.best(score))
