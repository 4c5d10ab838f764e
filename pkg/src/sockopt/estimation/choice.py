"""Choice probabilities and penalised log-likelihoods with analytic derivatives."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit, logsumexp

from sockopt.errors import InvalidInputError
from sockopt.estimation.models import BundleChoiceSet, ComparisonTrial


def choice_probability(chi: float, trial: ComparisonTrial) -> float:
    """Probability that pair A is chosen: sigma(chi * (m_B - m_A))."""
    if chi < 0:
        msg = f"chi must be >= 0, got {chi}"
        raise InvalidInputError(msg)
    return float(expit(chi * (trial.m_b - trial.m_a)))


def mnl_probabilities(delta: float, choice_set: BundleChoiceSet) -> np.ndarray:
    """Multinomial-logit probabilities for U(B) = delta * D(B) - C_soc(B) - C_rep(B)."""
    u = delta * choice_set.diversities - choice_set.costs
    return np.exp(u - logsumexp(u))


@dataclass(frozen=True)
class Evaluation:
    value: float
    gradient: float
    hessian: float


@dataclass(frozen=True)
class ComparisonArrays:
    delta: np.ndarray
    y: np.ndarray

    @classmethod
    def from_trials(cls, trials: Sequence[ComparisonTrial]) -> ComparisonArrays:
        delta = np.array([t.m_b - t.m_a for t in trials], dtype=np.float64)
        y = np.array([t.y for t in trials], dtype=np.float64)
        return cls(delta=delta, y=y)

    @property
    def informative(self) -> bool:
        return bool(np.any(self.delta != 0.0))

    @property
    def separated(self) -> bool:
        """Every informative choice went to the less severe pair; the likelihood keeps rising in chi."""
        d = self.delta[self.delta != 0.0]
        return bool(d.size) and bool(np.all((d > 0) == (self.y[self.delta != 0.0] == 1)))

    def evaluate(self, chi: float, ridge: float = 0.0) -> Evaluation:
        s = chi * self.delta
        ll = float(np.sum(self.y * log_expit(s) + (1.0 - self.y) * log_expit(-s)))
        p = expit(s)
        grad = float(np.sum(self.delta * (self.y - p)))
        hess = -float(np.sum(self.delta**2 * p * (1.0 - p)))
        return Evaluation(value=ll - ridge * chi**2, gradient=grad - 2.0 * ridge * chi, hessian=hess - 2.0 * ridge)


def chi_log_likelihood(chi: float, trials: Sequence[ComparisonTrial], ridge: float = 0.0) -> Evaluation:
    return ComparisonArrays.from_trials(trials).evaluate(chi, ridge)


@dataclass(frozen=True)
class BundleArrays:
    """Choice sets padded to a rectangle; padded slots carry zero probability."""

    diversity: np.ndarray
    cost: np.ndarray
    mask: np.ndarray
    chosen: np.ndarray

    @classmethod
    def from_sets(cls, choice_sets: Sequence[BundleChoiceSet]) -> BundleArrays:
        width = max(len(cs.bundles) for cs in choice_sets)
        n = len(choice_sets)
        diversity = np.zeros((n, width))
        cost = np.zeros((n, width))
        mask = np.zeros((n, width), dtype=bool)
        for i, cs in enumerate(choice_sets):
            k = len(cs.bundles)
            diversity[i, :k] = cs.diversities
            cost[i, :k] = cs.costs
            mask[i, :k] = True
        chosen = np.array([cs.chosen_index for cs in choice_sets], dtype=np.int64)
        return cls(diversity=diversity, cost=cost, mask=mask, chosen=chosen)

    @property
    def chosen_diversity(self) -> np.ndarray:
        return self.diversity[np.arange(self.chosen.size), self.chosen]

    @property
    def identified(self) -> bool:
        """False when every set offers bundles of a single diversity."""
        hi = np.where(self.mask, self.diversity, -np.inf).max(axis=1)
        lo = np.where(self.mask, self.diversity, np.inf).min(axis=1)
        return bool(np.any(hi > lo))

    @property
    def separated(self) -> bool:
        """Every chosen bundle has the largest diversity in its set."""
        hi = np.where(self.mask, self.diversity, -np.inf).max(axis=1)
        return bool(np.all(self.chosen_diversity >= hi))

    def evaluate(self, delta: float, ridge: float = 0.0) -> Evaluation:
        u = np.where(self.mask, delta * self.diversity - self.cost, -np.inf)
        lse = logsumexp(u, axis=1)
        rows = np.arange(self.chosen.size)
        ll = float(np.sum(u[rows, self.chosen] - lse))
        p = np.exp(u - lse[:, None])
        mean_d = np.sum(p * self.diversity, axis=1)
        var_d = np.sum(p * self.diversity**2, axis=1) - mean_d**2
        grad = float(np.sum(self.chosen_diversity - mean_d))
        hess = -float(np.sum(np.maximum(var_d, 0.0)))
        return Evaluation(value=ll - ridge * delta**2, gradient=grad - 2.0 * ridge * delta, hessian=hess - 2.0 * ridge)


def delta_log_likelihood(delta: float, choice_sets: Sequence[BundleChoiceSet], ridge: float = 0.0) -> Evaluation:
    return BundleArrays.from_sets(choice_sets).evaluate(delta, ridge)
