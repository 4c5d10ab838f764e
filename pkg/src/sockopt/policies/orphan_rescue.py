from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np

from sockopt.policies.base import PairingPolicy
from sockopt.policies.pairs import TOL, NO_PAIR, PairChoice, PairTable

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from sockopt.environment.models import AgentParams, SockInstance


def select_orphan_rescue(inventory: Sequence[SockInstance], tau_xi: float) -> PairChoice:
    return OrphanRescuePolicy(tau_xi).select_from(PairTable.build(inventory), None)


class OrphanRescuePolicy(PairingPolicy):
    """Wears the sock with the fewest acceptable partners first, next to its best partner.

    Degree ties go to the lowest instance id.
    """

    name = "orphan_rescue"

    def __init__(self, tau_xi: float = 0.7) -> None:
        self.tau_xi = tau_xi

    def acceptable(self, table: PairTable) -> NDArray[np.bool_]:
        return table.xi >= self.tau_xi - TOL

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        if len(table) == 0:
            return NO_PAIR
        degree = table.degrees(self.acceptable(table))
        target = int(np.lexsort((table.instance_ids, degree))[0])
        return table.choice(table.best(table.xi, table.involving(target)))

    def __repr__(self) -> str:
        return f"OrphanRescuePolicy(tau_xi={self.tau_xi})"
