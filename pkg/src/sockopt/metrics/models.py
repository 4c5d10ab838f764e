from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from sockopt.environment.models import SockInstance


@dataclass(frozen=True, slots=True)
class DayRecord:
    day: int
    feasible: bool
    z: int
    pair: tuple[int, int] | None = None
    eta: float | None = None
    social_cost: float = 0.0
    purchased: tuple[int, ...] = ()
    spend: float = 0.0
    eco: float = 0.0
    washed: int = 0
    lost: int = 0
    worn_out: int = 0


class RunMetrics(BaseModel):
    socks_purchased: int = Field(ge=0)
    money: float = Field(ge=0.0, description="C_$: total spend.")
    eco: float = Field(ge=0.0, description="C_eco: total eco proxy of purchases.")
    social: float = Field(ge=0.0, description="C_soc: total social cost.")
    infeasible_days: int = Field(ge=0)
    stranded: float = Field(ge=0.0, description="Stranded wear capacity, loss plus orphan terms.")
    stranded_loss: float = Field(ge=0.0)
    stranded_orphan: float = Field(ge=0.0)
    total_wears: int = Field(ge=0)
    reward_total: float
    worn_out: int = Field(ge=0)
    lost: int = Field(ge=0)
    diversity_initial: float = Field(ge=0.0)


METRIC_FIELDS: tuple[str, ...] = tuple(RunMetrics.model_fields)


class MetricSummary(BaseModel):
    mean: float
    half_width: float | None = Field(default=None, description="95% normal-approximation CI half-width.")
    n: int = Field(ge=1)

    @property
    def ci_available(self) -> bool:
        return self.half_width is not None


@dataclass
class RunTrace:
    """Everything needed to recompute a run's metrics after the fact."""

    initial_spend: float = 0.0
    initial_eco: float = 0.0
    days: list[DayRecord] = field(default_factory=list)
    lost: list[SockInstance] = field(default_factory=list)
    final_socks: list[SockInstance] = field(default_factory=list)
    diversity_terms: dict[str, float] = field(default_factory=dict)
