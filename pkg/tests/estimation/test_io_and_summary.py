import numpy as np
import pytest

from sockopt.errors import DataError, InvalidInputError
from sockopt.estimation import EstimationResult, RespondentFit, pearson, summary_statistics
from sockopt.estimation.io import (
    RESULTS_HEADER,
    format_results,
    load_trials,
    parse_bundles,
    parse_trials,
)

TRIALS = "respondent_id,m_a,m_b,choice\nr1,0,1,1\nr1,0.5,0.2,0\nr2,1,0,0\n"
BUNDLES = (
    "respondent_id,set_id,bundle_id,diversity,c_soc_hat,c_rep_hat,chosen\n"
    "r1,0,3,0.0,0.0,0.1,0\n"
    "r1,0,7,1.79,0.8,0.2,1\n"
    "r1,1,2,0.69,0.3,0.0,1\n"
    "r1,1,5,1.1,0.5,0.0,0\n"
)


class TestTrialFiles:
    def test_groups_by_respondent(self):
        data = parse_trials(TRIALS)
        assert data.ids() == ["r1", "r2"]
        first, second = data.respondents
        assert [(t.m_a, t.m_b, t.y) for t in first.trials] == [(0.0, 1.0, 1), (0.5, 0.2, 0)]
        assert len(second.trials) == 1

    def test_header_only_has_no_respondents(self):
        with pytest.raises(DataError, match="no data rows"):
            parse_trials("respondent_id,m_a,m_b,choice\n", "t.csv")

    def test_empty_file(self):
        with pytest.raises(DataError, match="empty"):
            parse_trials("", "t.csv")

    def test_missing_column(self):
        with pytest.raises(DataError, match="missing columns choice"):
            parse_trials("respondent_id,m_a,m_b\nr1,0,1\n", "t.csv")

    @pytest.mark.parametrize(
        "row,line",
        [
            ("r1,zero,1,1", "t.csv:3"),
            ("r1,0,1,2", "t.csv:3"),
            ("r1,0,1.5,1", "t.csv:3"),
        ],
    )
    def test_bad_rows_name_their_line(self, row, line):
        with pytest.raises(DataError, match=line):
            parse_trials("respondent_id,m_a,m_b,choice\nr1,0,1,1\n" + row + "\n", "t.csv")

    def test_unreadable_path(self, tmp_path):
        with pytest.raises(InvalidInputError):
            load_trials(tmp_path / "missing.csv")

    def test_undecodable_file_names_its_line(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_bytes(b"respondent_id,m_a,m_b,choice\nr\xff1,0,1,1\n")
        with pytest.raises(DataError, match=r"t.csv:2: not UTF-8"):
            load_trials(path)

    def test_blank_lines_are_skipped(self):
        data = parse_trials("respondent_id,m_a,m_b,choice\n\nr1,0,1,1\n\n")
        assert [len(r.trials) for r in data.respondents] == [1]

    def test_extra_columns_are_ignored(self):
        data = parse_trials("respondent_id,m_a,m_b,choice,note\nr1,0,1,1,first\n")
        assert data.respondents[0].trials[0].y == 1


class TestBundleFiles:
    def test_sets_keep_their_choice(self):
        (respondent,) = parse_bundles(BUNDLES).respondents
        first, second = respondent.choice_sets
        assert first.chosen_index == 1
        assert first.bundles[1].bundle_id == 7
        assert second.bundles[0].diversity == 0.69
        assert second.chosen_index == 0

    def test_two_chosen_bundles(self):
        text = BUNDLES.replace("r1,1,5,1.1,0.5,0.0,0", "r1,1,5,1.1,0.5,0.0,1")
        with pytest.raises(DataError, match="2 chosen"):
            parse_bundles(text, "b.csv")

    def test_fractional_set_id(self):
        with pytest.raises(DataError, match=r"b.csv:2: column set_id holds '0.5'"):
            parse_bundles(BUNDLES.replace("r1,0,3,", "r1,0.5,3,"), "b.csv")

    def test_single_bundle_set(self):
        text = BUNDLES + "r1,2,9,0.0,0.0,0.0,1\n"
        with pytest.raises(DataError, match="at least two bundles"):
            parse_bundles(text, "b.csv")


class TestResults:
    def test_missing_fits_are_blank(self):
        fits = [
            RespondentFit(
                respondent_id="r1",
                chi=EstimationResult(estimate=1.5, std_error=0.25, log_likelihood=-3.0, converged=True, ridge=0.0),
            )
        ]
        lines = format_results(fits).splitlines()
        assert lines[0] == ",".join(RESULTS_HEADER)
        assert lines[1] == "r1,1.5,0.25,,,1"


class TestSummaryStatistics:
    def test_identical_vectors(self):
        assert pearson([1.0, 2.0, 4.0], [1.0, 2.0, 4.0]) == pytest.approx(1.0)

    def test_negation(self):
        assert pearson([1.0, 2.0, 4.0], [-1.0, -2.0, -4.0]) == pytest.approx(-1.0)

    def test_constant_vector_has_no_correlation(self):
        assert pearson([1.0, 1.0, 1.0], [0.0, 1.0, 2.0]) is None

    def test_summary(self):
        stats = summary_statistics([1.0, 2.0, 6.0], [3.0, 2.0, 1.0], [0.1, 0.2, 0.9])
        assert stats.n == 3
        assert stats.chi_mean == 3.0
        assert stats.chi_median == 2.0
        assert stats.delta_median == 2.0
        assert stats.chi_skew > 0
        assert stats.corr_chi_delta == pytest.approx(np.corrcoef([1, 2, 6], [3, 2, 1])[0, 1])

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            summary_statistics([1.0, 2.0], [1.0], [0.5, 0.5])

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            summary_statistics([], [], [])
