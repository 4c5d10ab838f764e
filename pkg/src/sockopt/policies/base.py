from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np

from sockopt.policies.pairs import PairChoice, PairTable

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from sockopt.environment.models import AgentParams, SockInstance


class PairingPolicy:
    """Daily pair selection over the clean-sock inventory.

    Subclasses override :meth:`select_from` and, when they constrain pairs,
    :meth:`acceptable`, which also decides which socks count as stranded at the
    end of a run.
    """

    name: str = "base"

    def select(self, inventory: Sequence[SockInstance], agent: AgentParams | None = None) -> PairChoice:
        return self.select_from(PairTable.build(inventory), agent)

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        raise NotImplementedError

    def acceptable(self, table: PairTable) -> NDArray[np.bool_]:
        return np.ones(len(table), dtype=bool)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"
