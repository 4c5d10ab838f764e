from sockopt.oracle.coverage import (
    CoverageSolution,
    SockDesignInstance,
    brute_force_coverage,
    coverage_to_sock_design,
    sock_design_greedy,
    sock_design_value,
    verify_coverage_equivalence,
)
from sockopt.oracle.io import dump_instance, load_instance, parse_instance, solution_payload
from sockopt.oracle.knapsack import knapsack_to_sockplan, solve_knapsack_exact
from sockopt.oracle.models import CoverageInstance, KnapsackInstance, SockPlanInstance, SockPlanSolution
from sockopt.oracle.sockplan import (
    SockClass,
    brute_force_sockplan,
    evaluate_policy_on_instance,
    maximal_purchases,
    sock_classes,
    sockplan_from_catalogue,
)
from sockopt.oracle.verify import (
    GREEDY_RATIO,
    SweepReport,
    random_coverage,
    random_knapsack,
    random_policy_instance,
    verify_random_coverage,
    verify_random_reductions,
    verify_reduction,
)

__all__ = [
    "GREEDY_RATIO",
    "CoverageInstance",
    "CoverageSolution",
    "KnapsackInstance",
    "SockClass",
    "SockDesignInstance",
    "SockPlanInstance",
    "SockPlanSolution",
    "SweepReport",
    "brute_force_coverage",
    "brute_force_sockplan",
    "coverage_to_sock_design",
    "dump_instance",
    "evaluate_policy_on_instance",
    "knapsack_to_sockplan",
    "load_instance",
    "maximal_purchases",
    "parse_instance",
    "random_coverage",
    "random_knapsack",
    "random_policy_instance",
    "sock_classes",
    "sock_design_greedy",
    "sock_design_value",
    "sockplan_from_catalogue",
    "solution_payload",
    "solve_knapsack_exact",
    "verify_coverage_equivalence",
    "verify_random_coverage",
    "verify_random_reductions",
    "verify_reduction",
]
