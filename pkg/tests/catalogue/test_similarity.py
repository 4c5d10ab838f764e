from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sockopt.catalogue.models import SockDesign
from sockopt.catalogue.similarity import (
    compatibility,
    compatibility_matrix,
    dissimilarity,
    dissimilarity_matrix,
    feature_sets,
    mismatch_count,
    stimulus_space,
    weighted_coverage,
)
from sockopt.errors import InvalidInputError

SIZES = (32, 13, 3)

vectors = st.tuples(*(st.integers(0, m - 1) for m in SIZES))


class TestDissimilarity:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ((2, 5, 0), (2, 5, 0), 0.0),
            ((0, 0, 0), (1, 1, 1), 1.0),
            ((2, 5, 0), (2, 7, 0), 1 / 3),
        ],
    )
    def test_examples(self, a, b, expected):
        assert dissimilarity(a, b) == pytest.approx(expected)

    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ((2, 5, 0), (2, 5, 0), 1.0),
            ((0, 0, 0), (1, 1, 1), 0.0),
            ((2, 5, 0), (2, 7, 0), 2 / 3),
        ],
    )
    def test_compatibility_examples(self, a, b, expected):
        assert compatibility(a, b) == pytest.approx(expected)

    def test_length_mismatch_is_rejected(self):
        with pytest.raises(InvalidInputError):
            dissimilarity((0, 1), (0, 1, 2))

    def test_empty_vectors_are_rejected(self):
        with pytest.raises(InvalidInputError):
            mismatch_count((), ())

    @given(vectors, vectors, vectors)
    def test_metric_axioms(self, a, b, c):
        assert dissimilarity(a, b) >= 0.0
        assert (dissimilarity(a, b) == 0.0) == (a == b)
        assert dissimilarity(a, b) == dissimilarity(b, a)
        # exact rationals keep the triangle inequality free of rounding
        ab = Fraction(mismatch_count(a, b), 3)
        bc = Fraction(mismatch_count(b, c), 3)
        ac = Fraction(mismatch_count(a, c), 3)
        assert ac <= ab + bc

    @given(vectors, vectors)
    def test_compatibility_complements_dissimilarity(self, a, b):
        assert compatibility(a, b) + dissimilarity(a, b) == 1.0


class TestMatrices:
    def test_matrix_agrees_with_scalar_formula(self):
        rng = np.random.default_rng(0)
        feats = np.stack([rng.integers(m, size=12) for m in SIZES], axis=1)
        eta = dissimilarity_matrix(feats)
        xi = compatibility_matrix(feats)
        for i in range(len(feats)):
            for j in range(len(feats)):
                assert eta[i, j] == pytest.approx(dissimilarity(tuple(feats[i]), tuple(feats[j])))
        np.testing.assert_allclose(xi + eta, 1.0)
        np.testing.assert_array_equal(np.diag(eta), 0.0)

    def test_one_dimensional_input_is_rejected(self):
        with pytest.raises(InvalidInputError):
            dissimilarity_matrix([1, 2, 3])


class TestFeatureSets:
    def test_feature_sets_encode_positions(self):
        design = SockDesign(design_id="x", features=(2, 0, 1), price=1, eco=1.0)
        assert feature_sets(design) == frozenset({(0, 2), (1, 0), (2, 1)})

    def test_weighted_coverage_counts_shared_categories_once(self):
        a = SockDesign(design_id="a", features=(0, 0), price=1, eco=1.0)
        b = SockDesign(design_id="b", features=(0, 1), price=1, eco=1.0)
        weights = {(0, 0): 2.0, (1, 0): 1.0, (1, 1): 0.5}
        assert weighted_coverage([a, b], weights) == pytest.approx(3.5)
        assert weighted_coverage([], weights) == 0.0

    def test_stimulus_space_is_full_factorial(self):
        space = stimulus_space(3)
        assert space.shape == (27, 3)
        assert len({tuple(row) for row in space}) == 27
        assert space.min() == 0
        assert space.max() == 2

    def test_stimulus_space_rejects_empty_dimension(self):
        with pytest.raises(InvalidInputError):
            stimulus_space(0)
