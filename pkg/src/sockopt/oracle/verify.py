"""Randomised equivalence checks between the exact solvers."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from sockopt.catalogue.models import SockDesign
from sockopt.environment.rng import stream_generator
from sockopt.oracle.coverage import MAX_COVERAGE_SETS, brute_force_coverage, sock_design_greedy
from sockopt.oracle.knapsack import MAX_KNAPSACK_ITEMS, knapsack_to_sockplan, solve_knapsack_exact
from sockopt.oracle.models import CoverageInstance, KnapsackInstance, SockPlanInstance
from sockopt.oracle.sockplan import MAX_HORIZON, MAX_SOCK_CLASSES, MAX_SOCKS, brute_force_sockplan, sockplan_from_catalogue

logger = logging.getLogger(__name__)

GREEDY_RATIO = 1.0 - 1.0 / math.e


def verify_reduction(
    k: KnapsackInstance,
    *,
    max_items: int = MAX_KNAPSACK_ITEMS,
    max_classes: int = MAX_SOCK_CLASSES,
    max_socks: int = MAX_SOCKS,
    max_horizon: int = MAX_HORIZON,
) -> bool:
    """The knapsack is a yes-instance exactly when its Sock-Plan image reaches the threshold."""
    knapsack_yes = solve_knapsack_exact(k, max_items=max_items) >= k.target
    inst = knapsack_to_sockplan(k)
    solution = brute_force_sockplan(inst, max_classes=max_classes, max_socks=max_socks, max_horizon=max_horizon)
    return knapsack_yes == solution.meets(inst.threshold)


def random_knapsack(rng: np.random.Generator, n_items: int, max_value: int = 9) -> KnapsackInstance:
    """Between 1 and ``n_items`` items with weights and values in [1, max_value]; capacity and target span yes and no cases."""
    n = int(rng.integers(1, n_items + 1)) if n_items > 0 else 0
    items = tuple((int(rng.integers(1, max_value + 1)), int(rng.integers(1, max_value + 1))) for _ in range(n))
    total_w = sum(w for w, _ in items)
    total_v = sum(v for _, v in items)
    return KnapsackInstance(
        items=items,
        capacity=int(rng.integers(0, total_w + 1)),
        target=int(rng.integers(0, total_v + 2)),
    )


@dataclass
class SweepReport:
    trials: int = 0
    passed: int = 0
    failures: list[dict[str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def summary(self, what: str = "equivalent") -> str:
        return f"{self.passed}/{self.trials} {what}"


def verify_random_reductions(n_items: int, trials: int, seed: int, *, max_value: int = 9) -> SweepReport:
    rng = stream_generator(seed, 0, "oracle")
    report = SweepReport()
    for t in range(trials):
        k = random_knapsack(rng, n_items, max_value)
        report.trials += 1
        if verify_reduction(k):
            report.passed += 1
        else:
            logger.warning("Reduction mismatch on trial %d: %s", t, k)
            report.failures.append({"trial": t, "items": list(k.items), "capacity": k.capacity, "target": k.target})
    logger.info("Reduction sweep: %s", report.summary())
    return report


def random_coverage(
    rng: np.random.Generator, *, max_sets: int = 10, max_elements: int = 12, max_weight: int = 9, max_cost: int = 5
) -> CoverageInstance:
    m = int(rng.integers(1, max_elements + 1))
    n = int(rng.integers(1, max_sets + 1))
    weights = tuple(float(w) for w in rng.integers(0, max_weight + 1, size=m))
    sets = tuple(frozenset(int(u) for u in np.flatnonzero(rng.random(m) < 0.3)) for _ in range(n))
    costs = tuple(int(c) for c in rng.integers(1, max_cost + 1, size=n))
    budget = int(rng.integers(1, sum(costs) + 1))
    return CoverageInstance(weights=weights, sets=sets, costs=costs, budget=budget)


def verify_random_coverage(trials: int, seed: int, *, variant: str = "enumerate") -> SweepReport:
    """Greedy value at least (1 - 1/e) times the exhaustive optimum on random instances."""
    rng = stream_generator(seed, 0, "oracle")
    report = SweepReport()
    for t in range(trials):
        inst = random_coverage(rng, max_sets=min(10, MAX_COVERAGE_SETS))
        greedy = sock_design_greedy(inst, "simple" if variant == "simple" else "enumerate")
        optimum = brute_force_coverage(inst)
        report.trials += 1
        if greedy.value >= GREEDY_RATIO * optimum.value - 1e-9:
            report.passed += 1
        else:
            report.failures.append({"trial": t, "greedy": greedy.value, "optimum": optimum.value})
    logger.info("Coverage sweep: %s", report.summary("within ratio"))
    return report


def random_policy_instance(
    rng: np.random.Generator, *, max_socks: int = 10, max_horizon: int = 5, feature_sizes: tuple[int, ...] = (3, 3, 2)
) -> SockPlanInstance:
    """Small catalogue-backed instance with two copies per design and deterministic washes."""
    n_designs = int(rng.integers(1, max_socks // 2 + 1))
    designs = [
        SockDesign(
            design_id=f"d{i + 1:02d}",
            features=tuple(int(rng.integers(m)) for m in feature_sizes),
            price=int(rng.integers(1, 5)),
            eco=0.0,
        )
        for i in range(n_designs)
    ]
    total = 2 * sum(d.price for d in designs)
    return sockplan_from_catalogue(
        designs,
        T=int(rng.integers(1, max_horizon + 1)),
        kappa=int(rng.integers(2, 5)),
        budget=int(rng.integers(0, total + 1)),
        theta=[int(t) for t in rng.integers(1, 4, size=n_designs)],
    )
