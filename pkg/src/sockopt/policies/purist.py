from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from sockopt.policies.base import PairingPolicy
from sockopt.policies.pairs import TOL, PairChoice, PairTable

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray

    from sockopt.environment.models import AgentParams, SockInstance


def select_purist(inventory: Sequence[SockInstance], tau_eta: float) -> PairChoice:
    return PuristPolicy(tau_eta).select_from(PairTable.build(inventory), None)


class PuristPolicy(PairingPolicy):
    """Only wears pairs with eta <= tau_eta; idles otherwise."""

    name = "purist"

    def __init__(self, tau_eta: float = 0.0) -> None:
        self.tau_eta = tau_eta

    def acceptable(self, table: PairTable) -> NDArray[np.bool_]:
        return table.eta <= self.tau_eta + TOL

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        return table.choice(table.best(table.xi, self.acceptable(table)))

    def __repr__(self) -> str:
        return f"PuristPolicy(tau_eta={self.tau_eta})"
