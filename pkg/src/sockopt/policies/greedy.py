from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from sockopt.policies.base import PairingPolicy
from sockopt.policies.pairs import PairChoice, PairTable

if TYPE_CHECKING:
    from sockopt.environment.models import AgentParams, SockInstance


def select_greedy(inventory: Sequence[SockInstance]) -> PairChoice:
    return GreedyPolicy().select_from(PairTable.build(inventory), None)


class GreedyPolicy(PairingPolicy):
    name = "greedy"

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        return table.choice(table.best(table.xi))
