from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from sockopt.policies.base import PairingPolicy
from sockopt.policies.pairs import TOL, PairChoice, PairTable

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray

    from sockopt.environment.models import AgentParams, SockInstance


def select_threshold_mix(inventory: Sequence[SockInstance], tau_xi: float) -> PairChoice:
    return ThresholdMixPolicy(tau_xi).select_from(PairTable.build(inventory), None)


class ThresholdMixPolicy(PairingPolicy):
    """Best pair with xi >= tau_xi when one exists, else the best mismatched pair."""

    name = "threshold_mix"

    def __init__(self, tau_xi: float = 0.7) -> None:
        self.tau_xi = tau_xi

    def acceptable(self, table: PairTable) -> NDArray[np.bool_]:
        return table.xi >= self.tau_xi - TOL

    def select_from(self, table: PairTable, agent: AgentParams | None) -> PairChoice:
        row = table.best(table.xi, self.acceptable(table))
        if row is None:
            row = table.best(table.xi)
        return table.choice(row)

    def __repr__(self) -> str:
        return f"ThresholdMixPolicy(tau_xi={self.tau_xi})"
