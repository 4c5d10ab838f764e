from __future__ import annotations

from dataclasses import dataclass, field

from sockopt.app.settings import AgentConfig, SimulationConfig
from sockopt.catalogue.models import FeatureVector, SockDesign

AgentParams = AgentConfig
SimConfig = SimulationConfig


@dataclass(slots=True, eq=False)
class SockInstance:
    """A physical sock. Instances compare by identity; two socks of one design are distinct."""

    instance_id: int
    design: SockDesign
    theta: int
    d: float
    tau: int = 0

    @property
    def features(self) -> FeatureVector:
        return self.design.features

    @property
    def design_id(self) -> str:
        return self.design.design_id

    @property
    def remaining(self) -> int:
        return self.theta - self.tau


def make_instance(instance_id: int, design: SockDesign, *, theta: int, d: float) -> SockInstance:
    """New sock with tau=0; per-design overrides beat the defaults."""
    return SockInstance(
        instance_id=instance_id,
        design=design,
        theta=design.theta if design.theta is not None else theta,
        d=design.d if design.d is not None else d,
    )


@dataclass
class SimState:
    """Household state X(t) = (S(t), L(t), b(t)) plus the counters feeding RunMetrics."""

    budget_remaining: float
    day: int = 0
    inventory: list[SockInstance] = field(default_factory=list)
    laundry: list[SockInstance] = field(default_factory=list)
    spend: float = 0.0
    eco: float = 0.0
    purchased: int = 0
    worn_out: list[SockInstance] = field(default_factory=list)
    lost: list[SockInstance] = field(default_factory=list)
    wears: int = 0
    social: float = 0.0
    infeasible_days: int = 0
    reward: float = 0.0
    purchasing_closed: bool = False
    next_id: int = 0

    def allocate_id(self) -> int:
        iid = self.next_id
        self.next_id += 1
        return iid

    @property
    def owned(self) -> list[SockInstance]:
        return [*self.inventory, *self.laundry]

    def check_invariants(self) -> None:
        """Raise AssertionError when the state breaks conservation, disjointness or the budget."""
        ids = [s.instance_id for s in (*self.inventory, *self.laundry, *self.worn_out, *self.lost)]
        if len(ids) != len(set(ids)):
            msg = "a sock appears in more than one place"
            raise AssertionError(msg)
        if len(ids) != self.purchased:
            msg = f"conservation broken: {self.purchased} bought, {len(ids)} accounted for"
            raise AssertionError(msg)
        if self.budget_remaining < -1e-9:
            msg = f"budget overdrawn: {self.budget_remaining}"
            raise AssertionError(msg)
        for sock in self.owned:
            if not 0 <= sock.tau <= sock.theta:
                msg = f"sock {sock.instance_id} has tau={sock.tau} with theta={sock.theta}"
                raise AssertionError(msg)
