"""Synthetic respondents for checking that the estimators recover known parameters."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.special import expit

from sockopt.catalogue.similarity import stimulus_space
from sockopt.environment.rng import stream_generator
from sockopt.errors import InvalidInputError
from sockopt.estimation.models import BundleChoiceSet, BundleOption, ChoiceData, ComparisonTrial, RespondentData

if TYPE_CHECKING:
    from sockopt.app.settings import EstimationConfig, ParamDistribution
    from sockopt.estimation.bundles import BundleCostTable, BundleDesign

logger = logging.getLogger(__name__)


def build_trial_design(
    n_trials: int,
    k: int,
    gamma: float,
    rng: np.random.Generator,
    *,
    design: Literal["contrast", "factorial"] = "contrast",
    levels: int = 3,
) -> np.ndarray:
    """(n_trials, 2) array of severities g(eta) = eta ** gamma for pairs A and B.

    ``contrast`` shows a matching pair against a pair that differs in every feature,
    in random order. ``factorial`` draws both pairs from the full stimulus space.
    """
    if n_trials < 0 or k < 1:
        msg = f"need n_trials >= 0 and k >= 1, got {n_trials}, {k}"
        raise InvalidInputError(msg)
    if design == "contrast":
        a_matches = rng.random(n_trials) < 0.5
        eta = np.column_stack([np.where(a_matches, 0.0, 1.0), np.where(a_matches, 1.0, 0.0)])
    else:
        stimuli = stimulus_space(k, levels)
        idx = rng.integers(len(stimuli), size=(n_trials, 4))
        s = stimuli[idx]
        eta = np.column_stack([(s[:, 0] != s[:, 1]).mean(axis=1), (s[:, 2] != s[:, 3]).mean(axis=1)])
    return eta**gamma


def draw_trials(severities: np.ndarray, chi: float, rng: np.random.Generator) -> list[ComparisonTrial]:
    p_a = expit(chi * (severities[:, 1] - severities[:, 0]))
    y = rng.random(len(severities)) < p_a
    return [
        ComparisonTrial(m_a=float(a), m_b=float(b), y=int(c)) for (a, b), c in zip(severities, y, strict=True)
    ]


def draw_bundle_choices(
    design: BundleDesign, costs: BundleCostTable, chi: float, delta: float, rng: np.random.Generator
) -> list[BundleChoiceSet]:
    """Multinomial-logit choices; the respondent weighs social cost at their own sensitivity."""
    diversity = design.diversity
    c_soc = costs.c_soc(chi)
    out = []
    for set_id, members in enumerate(design.sets):
        idx = np.asarray(members)
        u = delta * diversity[idx] - c_soc[idx] - costs.c_rep[idx]
        p = np.exp(u - u.max())
        p /= p.sum()
        chosen = int(rng.choice(idx.size, p=p))
        options = tuple(
            BundleOption(
                diversity=float(diversity[b]), c_soc_hat=float(c_soc[b]), c_rep_hat=float(costs.c_rep[b]), bundle_id=int(b)
            )
            for b in idx
        )
        out.append(BundleChoiceSet(bundles=options, chosen_index=chosen, set_id=set_id))
    return out


def synthesize_respondents(
    chi_dist: ParamDistribution,
    delta_dist: ParamDistribution,
    n: int,
    config: EstimationConfig,
    *,
    seed: int,
    bundle_design: BundleDesign | None = None,
    bundle_costs: BundleCostTable | None = None,
) -> ChoiceData:
    """Respondents with known (chi, delta) and responses drawn from the choice models.

    Respondent ``i`` draws everything from its own study stream, so the first
    respondents do not change when ``n`` grows.
    """
    if n < 0:
        msg = f"n must be >= 0, got {n}"
        raise InvalidInputError(msg)
    if (bundle_design is None) != (bundle_costs is None):
        msg = "bundle design and bundle costs must be given together"
        raise InvalidInputError(msg)

    respondents = []
    for i in range(n):
        rng = stream_generator(seed, i, "study")
        chi = float(chi_dist.sample(rng, 1)[0])
        delta = float(delta_dist.sample(rng, 1)[0])
        severities = build_trial_design(
            config.n_trials,
            config.stimulus_k,
            config.gamma,
            rng,
            design=config.trial_design,
            levels=config.stimulus_levels,
        )
        respondent = RespondentData(
            respondent_id=f"r{i + 1:04d}",
            trials=draw_trials(severities, chi, rng),
            chi_true=chi,
            delta_true=delta,
        )
        if bundle_design is not None and bundle_costs is not None:
            respondent.choice_sets = draw_bundle_choices(bundle_design, bundle_costs, chi, delta, rng)
        noise = config.compliance_noise * rng.standard_normal()
        respondent.compliance = float(expit(config.compliance_intercept + config.compliance_slope * delta + noise))
        respondents.append(respondent)
    logger.info("Synthesised %d respondents", n)
    return ChoiceData.from_respondents(respondents)
