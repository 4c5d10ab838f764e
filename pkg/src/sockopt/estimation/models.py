from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field

from sockopt.errors import InvalidInputError


@dataclass(frozen=True, slots=True)
class ComparisonTrial:
    """Two pairs shown side by side; ``y`` is 1 when pair A was chosen."""

    m_a: float
    m_b: float
    y: int

    def __post_init__(self) -> None:
        if self.y not in (0, 1):
            msg = f"choice must be 0 or 1, got {self.y}"
            raise InvalidInputError(msg)
        if not (0.0 <= self.m_a <= 1.0 and 0.0 <= self.m_b <= 1.0):
            msg = f"severities must lie in [0, 1], got ({self.m_a}, {self.m_b})"
            raise InvalidInputError(msg)

    def swapped(self) -> ComparisonTrial:
        return ComparisonTrial(m_a=self.m_b, m_b=self.m_a, y=1 - self.y)


@dataclass(frozen=True, slots=True)
class BundleOption:
    diversity: float
    c_soc_hat: float
    c_rep_hat: float
    bundle_id: int = 0

    @property
    def cost(self) -> float:
        return self.c_soc_hat + self.c_rep_hat


@dataclass(frozen=True, slots=True)
class BundleChoiceSet:
    bundles: tuple[BundleOption, ...]
    chosen_index: int
    set_id: int = 0

    def __post_init__(self) -> None:
        if len(self.bundles) < 2:
            msg = f"choice set {self.set_id} needs at least two bundles, got {len(self.bundles)}"
            raise InvalidInputError(msg)
        if not 0 <= self.chosen_index < len(self.bundles):
            msg = f"choice set {self.set_id}: chosen index {self.chosen_index} out of range"
            raise InvalidInputError(msg)

    @property
    def diversities(self) -> np.ndarray:
        return np.array([b.diversity for b in self.bundles], dtype=np.float64)

    @property
    def costs(self) -> np.ndarray:
        return np.array([b.cost for b in self.bundles], dtype=np.float64)


class EstimationResult(BaseModel):
    estimate: float = Field(ge=0.0)
    std_error: float | None = Field(default=None, description="Observed-information standard error.")
    log_likelihood: float
    converged: bool
    ridge: float = Field(ge=0.0)
    identified: bool = True
    n_obs: int = Field(default=0, ge=0)


@dataclass
class RespondentData:
    respondent_id: str
    trials: list[ComparisonTrial] = field(default_factory=list)
    choice_sets: list[BundleChoiceSet] = field(default_factory=list)
    # generating parameters, known only for synthetic respondents
    chi_true: float | None = None
    delta_true: float | None = None
    compliance: float | None = None


@dataclass
class ChoiceData:
    respondents: list[RespondentData] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.respondents)

    def ids(self) -> list[str]:
        return [r.respondent_id for r in self.respondents]

    @classmethod
    def from_respondents(cls, respondents: Sequence[RespondentData]) -> ChoiceData:
        seen: set[str] = set()
        for r in respondents:
            if r.respondent_id in seen:
                msg = f"duplicate respondent id '{r.respondent_id}'"
                raise InvalidInputError(msg)
            seen.add(r.respondent_id)
        return cls(respondents=list(respondents))


class RespondentFit(BaseModel):
    respondent_id: str
    chi: EstimationResult | None = None
    delta: EstimationResult | None = None

    @property
    def converged(self) -> bool:
        return all(r.converged for r in (self.chi, self.delta) if r is not None)
