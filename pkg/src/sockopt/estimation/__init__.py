from sockopt.estimation.bundles import (
    Bundle,
    BundleCosts,
    BundleCostTable,
    BundleDesign,
    build_bundle_design,
    bundle_cost_table,
    bundle_diversity,
    reference_regime,
    simulate_bundle_costs,
)
from sockopt.estimation.chi import fit_chi
from sockopt.estimation.choice import (
    BundleArrays,
    ComparisonArrays,
    Evaluation,
    chi_log_likelihood,
    choice_probability,
    delta_log_likelihood,
    mnl_probabilities,
)
from sockopt.estimation.delta import fit_delta
from sockopt.estimation.fitting import FitTask, fit_respondent, fit_respondents
from sockopt.estimation.models import (
    BundleChoiceSet,
    BundleOption,
    ChoiceData,
    ComparisonTrial,
    EstimationResult,
    RespondentData,
    RespondentFit,
)
from sockopt.estimation.summary import SummaryStatistics, pearson, summary_statistics
from sockopt.estimation.synthetic import (
    build_trial_design,
    draw_bundle_choices,
    draw_trials,
    synthesize_respondents,
)

__all__ = [
    "Bundle",
    "BundleArrays",
    "BundleChoiceSet",
    "BundleCostTable",
    "BundleCosts",
    "BundleDesign",
    "BundleOption",
    "ChoiceData",
    "ComparisonArrays",
    "ComparisonTrial",
    "EstimationResult",
    "Evaluation",
    "FitTask",
    "RespondentData",
    "RespondentFit",
    "SummaryStatistics",
    "build_bundle_design",
    "build_trial_design",
    "bundle_cost_table",
    "bundle_diversity",
    "chi_log_likelihood",
    "choice_probability",
    "delta_log_likelihood",
    "draw_bundle_choices",
    "draw_trials",
    "fit_chi",
    "fit_delta",
    "fit_respondent",
    "fit_respondents",
    "mnl_probabilities",
    "pearson",
    "reference_regime",
    "simulate_bundle_costs",
    "summary_statistics",
    "synthesize_respondents",
]
