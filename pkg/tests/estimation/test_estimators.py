import numpy as np
import pytest

from sockopt.app.settings import EstimationConfig, ParamDistribution
from sockopt.errors import InvalidInputError
from sockopt.estimation import (
    BundleChoiceSet,
    BundleOption,
    ComparisonTrial,
    RespondentData,
    build_trial_design,
    chi_log_likelihood,
    delta_log_likelihood,
    draw_trials,
    fit_chi,
    fit_delta,
    fit_respondents,
    synthesize_respondents,
)
from sockopt.estimation.solver import maximize_concave


def _set(diversities, chosen, costs=None):
    costs = costs or [0.0] * len(diversities)
    options = tuple(
        BundleOption(diversity=d, c_soc_hat=c, c_rep_hat=0.0, bundle_id=i)
        for i, (d, c) in enumerate(zip(diversities, costs, strict=True))
    )
    return BundleChoiceSet(bundles=options, chosen_index=chosen)


MIXED_TRIALS = [
    ComparisonTrial(0.0, 1.0, 1),
    ComparisonTrial(0.0, 1.0, 1),
    ComparisonTrial(0.0, 1.0, 0),
    ComparisonTrial(0.3, 0.8, 1),
    ComparisonTrial(0.9, 0.1, 0),
    ComparisonTrial(0.9, 0.1, 1),
]

MIXED_SETS = [
    _set([0.0, 0.69, 1.1], 2, [0.0, 0.3, 0.6]),
    _set([0.0, 0.69, 1.1], 0, [0.0, 0.3, 0.6]),
    _set([0.0, 1.79], 1, [0.0, 0.9]),
    _set([0.69, 1.79], 0, [0.1, 0.9]),
]

SAMPLE_SIZES = (50, 200, 800)
DIVERSITY_LEVELS = (0.0, 0.69, 1.1, 1.79)


def _mnl_sets(n, delta, rng):
    diversity = rng.choice(DIVERSITY_LEVELS, size=(n, 3))
    u = delta * diversity
    p = np.exp(u - u.max(axis=1, keepdims=True))
    p /= p.sum(axis=1, keepdims=True)
    return [_set(row.tolist(), int(rng.choice(3, p=probs))) for row, probs in zip(diversity, p, strict=True)]


def _mean_error(fit, draw, truth, n, reps=30):
    errors = [abs(fit(draw(n, np.random.default_rng([n, r]))).estimate - truth) for r in range(reps)]
    return float(np.mean(errors))


class TestSolver:
    def test_interior_root(self):
        outcome = maximize_concave(lambda x: 3.0 - x, upper_bound=100.0)
        assert outcome.x == pytest.approx(3.0, abs=1e-9)
        assert outcome.converged

    def test_boundary_at_zero(self):
        assert maximize_concave(lambda x: -1.0 - x, upper_bound=10.0).x == 0.0

    def test_bound_reached(self):
        outcome = maximize_concave(lambda x: 1.0, upper_bound=50.0)
        assert outcome.x == 50.0
        assert not outcome.converged


class TestFitChi:
    def test_balanced_responses_give_zero(self):
        trials = [ComparisonTrial(0.0, 1.0, 1), ComparisonTrial(0.0, 1.0, 0)] * 10
        assert fit_chi(trials).estimate == 0.0

    def test_separated_choices_diverge_without_ridge(self):
        trials = [ComparisonTrial(0.0, 1.0, 1), ComparisonTrial(0.8, 0.2, 0)] * 5
        free = fit_chi(trials, ridge=0.0, upper_bound=1e4)
        assert not free.converged
        assert free.estimate == 1e4
        penalised = fit_chi(trials, ridge=0.01)
        assert penalised.converged
        assert 0.0 < penalised.estimate < 1e4

    def test_uninformative_trials_are_flagged(self):
        result = fit_chi([ComparisonTrial(0.4, 0.4, 1)] * 3)
        assert not result.identified
        assert result.estimate == 0.0

    @pytest.mark.parametrize("trials,ridge", [([], 0.0), ([ComparisonTrial(0.0, 1.0, 1)], -1.0)])
    def test_invalid_input(self, trials, ridge):
        with pytest.raises(InvalidInputError):
            fit_chi(trials, ridge)

    @pytest.mark.parametrize("eps", [1e-4, 1e-3])
    def test_local_maximum(self, eps):
        result = fit_chi(MIXED_TRIALS, ridge=1e-3)
        assert result.converged
        at = chi_log_likelihood(result.estimate, MIXED_TRIALS, 1e-3).value
        for chi in (result.estimate - eps, result.estimate + eps):
            assert at >= chi_log_likelihood(chi, MIXED_TRIALS, 1e-3).value

    def test_scaling_severities_scales_the_estimate(self):
        c = 0.5
        scaled = [ComparisonTrial(t.m_a * c, t.m_b * c, t.y) for t in MIXED_TRIALS]
        base = fit_chi(MIXED_TRIALS, ridge=0.0).estimate
        assert base > 0
        assert fit_chi(scaled, ridge=0.0).estimate == pytest.approx(base / c, rel=1e-6)

    def test_standard_error_from_curvature(self):
        result = fit_chi(MIXED_TRIALS, ridge=1e-3)
        hessian = chi_log_likelihood(result.estimate, MIXED_TRIALS, 1e-3).hessian
        assert result.std_error == pytest.approx(1.0 / np.sqrt(-hessian))
        assert result.n_obs == len(MIXED_TRIALS)

    def test_recovers_known_sensitivity(self):
        config = EstimationConfig(n_trials=2000, respondents=20)
        truth = ParamDistribution(kind="constant", value=1.12)
        data = synthesize_respondents(truth, truth, 20, config, seed=5)
        estimates = [fit_chi(r.trials, config.ridge_chi).estimate for r in data.respondents]
        assert np.mean(np.abs(np.array(estimates) - 1.12)) <= 0.1

    def test_error_shrinks_with_more_trials(self):
        def draw(n, rng):
            return draw_trials(build_trial_design(n, 3, 1.02, rng), 1.12, rng)

        small, medium, large = (_mean_error(fit_chi, draw, 1.12, n) for n in SAMPLE_SIZES)
        assert large < medium < small


class TestFitDelta:
    def test_always_most_diverse_diverges_without_ridge(self):
        sets = [_set([0.0, 1.0], 1)]
        free = fit_delta(sets, ridge=0.0, upper_bound=500.0)
        assert (free.estimate, free.converged) == (500.0, False)
        penalised = fit_delta(sets, ridge=1e-3)
        assert penalised.converged
        assert penalised.estimate > 1.0

    def test_uniform_choices_give_zero(self):
        sets = [_set([0.0, 1.0], 0), _set([0.0, 1.0], 1)] * 4
        assert fit_delta(sets).estimate == 0.0

    def test_equal_diversity_is_unidentified(self):
        result = fit_delta([_set([0.7, 0.7], 0, [0.0, 1.0]), _set([1.1, 1.1, 1.1], 2)])
        assert not result.identified
        assert result.estimate == 0.0

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            fit_delta([])

    def test_error_shrinks_with_more_choice_sets(self):
        def draw(n, rng):
            return _mnl_sets(n, 1.753, rng)

        small, medium, large = (_mean_error(fit_delta, draw, 1.753, n) for n in SAMPLE_SIZES)
        assert large < medium < small

    @pytest.mark.parametrize("eps", [1e-4, 1e-3])
    def test_local_maximum(self, eps):
        result = fit_delta(MIXED_SETS, ridge=1e-3)
        assert result.converged
        assert result.estimate > 0
        at = delta_log_likelihood(result.estimate, MIXED_SETS, 1e-3).value
        for delta in (result.estimate - eps, result.estimate + eps):
            assert at >= delta_log_likelihood(delta, MIXED_SETS, 1e-3).value


class TestFitRespondents:
    def test_one_fit_per_respondent(self):
        respondents = [
            RespondentData(respondent_id="a", trials=MIXED_TRIALS),
            RespondentData(respondent_id="b", choice_sets=MIXED_SETS),
            RespondentData(respondent_id="c", trials=MIXED_TRIALS, choice_sets=MIXED_SETS),
        ]
        fits = fit_respondents(respondents, EstimationConfig())
        assert [f.respondent_id for f in fits] == ["a", "b", "c"]
        assert fits[0].delta is None
        assert fits[1].chi is None
        assert fits[2].chi == fits[0].chi
        assert fits[2].delta == fits[1].delta
        assert all(f.converged for f in fits)
