import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sockopt.errors import InvalidInputError
from sockopt.estimation import (
    BundleChoiceSet,
    BundleOption,
    ComparisonTrial,
    chi_log_likelihood,
    choice_probability,
    delta_log_likelihood,
    mnl_probabilities,
)

severities = st.floats(0.0, 1.0)


def _set(diversities, costs=None, chosen=0):
    costs = costs or [0.0] * len(diversities)
    options = tuple(
        BundleOption(diversity=d, c_soc_hat=c, c_rep_hat=0.0, bundle_id=i)
        for i, (d, c) in enumerate(zip(diversities, costs, strict=True))
    )
    return BundleChoiceSet(bundles=options, chosen_index=chosen)


class TestComparisonTrial:
    @pytest.mark.parametrize("fields", [{"m_a": 0.0, "m_b": 1.0, "y": 2}, {"m_a": -0.1, "m_b": 0.5, "y": 1}])
    def test_invalid(self, fields):
        with pytest.raises(InvalidInputError):
            ComparisonTrial(**fields)

    def test_swapped(self):
        assert ComparisonTrial(0.2, 0.9, 1).swapped() == ComparisonTrial(0.9, 0.2, 0)


class TestChoiceProbability:
    @given(severities, st.floats(0.0, 20.0))
    def test_equal_severities_are_a_coin_flip(self, m, chi):
        assert choice_probability(chi, ComparisonTrial(m, m, 1)) == 0.5

    @given(severities, severities)
    def test_indifferent_respondent(self, a, b):
        assert choice_probability(0.0, ComparisonTrial(a, b, 0)) == 0.5

    def test_logistic_value(self):
        assert choice_probability(2.0, ComparisonTrial(0.0, 1.0, 1)) == pytest.approx(0.8808, abs=1e-4)

    def test_negative_chi(self):
        with pytest.raises(InvalidInputError):
            choice_probability(-1.0, ComparisonTrial(0.0, 1.0, 1))

    @given(severities, severities, st.floats(0.0, 20.0))
    def test_swapping_pairs_complements(self, a, b, chi):
        trial = ComparisonTrial(a, b, 1)
        assert choice_probability(chi, trial) + choice_probability(chi, trial.swapped()) == pytest.approx(1.0)


class TestMultinomialLogit:
    @given(
        st.floats(0.0, 10.0),
        st.lists(st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 50.0)), min_size=2, max_size=6),
    )
    def test_probabilities_sum_to_one(self, delta, options):
        choice_set = _set([d for d, _ in options], [c for _, c in options])
        p = mnl_probabilities(delta, choice_set)
        assert abs(p.sum() - 1.0) <= 1e-12
        assert np.all(p >= 0.0)

    def test_equal_utilities(self):
        np.testing.assert_allclose(mnl_probabilities(3.0, _set([1.0, 1.0, 1.0])), [1 / 3] * 3)

    def test_costs_lower_probability(self):
        p = mnl_probabilities(0.0, _set([0.0, 0.0], [0.0, math.log(3.0)]))
        np.testing.assert_allclose(p, [0.75, 0.25])

    def test_sets_need_two_bundles(self):
        with pytest.raises(InvalidInputError):
            _set([1.0])

    def test_chosen_index_in_range(self):
        with pytest.raises(InvalidInputError):
            _set([0.0, 1.0], chosen=2)


class TestLogLikelihoods:
    TRIALS = [ComparisonTrial(0.0, 1.0, 1), ComparisonTrial(0.5, 0.2, 1), ComparisonTrial(1.0, 0.1, 0)]
    SETS = [_set([0.0, 0.7, 1.1], [0.2, 0.4, 0.9], chosen=1), _set([1.8, 0.0], [1.0, 0.0], chosen=1)]

    @pytest.mark.parametrize("chi", [0.0, 0.4, 2.5])
    @pytest.mark.parametrize("ridge", [0.0, 0.1])
    def test_chi_derivatives(self, chi, ridge):
        h = 1e-5
        at = chi_log_likelihood(chi, self.TRIALS, ridge)
        up = chi_log_likelihood(chi + h, self.TRIALS, ridge)
        down = chi_log_likelihood(chi - h, self.TRIALS, ridge)
        assert at.gradient == pytest.approx((up.value - down.value) / (2 * h), abs=1e-6)
        assert at.hessian == pytest.approx((up.gradient - down.gradient) / (2 * h), abs=1e-5)
        assert at.hessian < 0

    @pytest.mark.parametrize("delta", [0.0, 0.8, 3.0])
    @pytest.mark.parametrize("ridge", [0.0, 0.1])
    def test_delta_derivatives(self, delta, ridge):
        h = 1e-5
        at = delta_log_likelihood(delta, self.SETS, ridge)
        up = delta_log_likelihood(delta + h, self.SETS, ridge)
        down = delta_log_likelihood(delta - h, self.SETS, ridge)
        assert at.gradient == pytest.approx((up.value - down.value) / (2 * h), abs=1e-6)
        assert at.hessian == pytest.approx((up.gradient - down.gradient) / (2 * h), abs=1e-5)

    def test_delta_likelihood_matches_probabilities(self):
        ll = delta_log_likelihood(0.8, self.SETS).value
        expected = sum(math.log(mnl_probabilities(0.8, cs)[cs.chosen_index]) for cs in self.SETS)
        assert ll == pytest.approx(expected)

    def test_unequal_set_sizes_are_padded(self):
        sets = [_set([0.0, 1.0], chosen=1), _set([0.0, 0.5, 1.0, 1.5], chosen=3)]
        expected = math.log(mnl_probabilities(1.0, sets[0])[1]) + math.log(mnl_probabilities(1.0, sets[1])[3])
        assert delta_log_likelihood(1.0, sets).value == pytest.approx(expected)
