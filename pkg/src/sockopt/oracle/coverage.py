"""Sock-Design as budgeted maximum coverage: the value functional, the greedy and an exact oracle."""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

from sockopt.errors import GuardExceededError
from sockopt.oracle.models import CoverageInstance

logger = logging.getLogger(__name__)

MAX_COVERAGE_SETS = 16


def sock_design_value(selection: Iterable[Iterable[Hashable]], weights: Mapping[Hashable, float]) -> float:
    """Total weight of the categories covered by the union of the selected feature sets."""
    covered: set[Hashable] = set()
    for categories in selection:
        covered.update(categories)
    return float(sum(weights.get(u, 0.0) for u in covered))


@dataclass(frozen=True)
class CoverageSolution:
    selection: tuple[int, ...]
    value: float
    cost: int


def _solution(inst: CoverageInstance, selection: Iterable[int]) -> CoverageSolution:
    chosen = tuple(sorted(selection))
    return CoverageSolution(selection=chosen, value=inst.value(chosen), cost=inst.cost(chosen))


def _complete_by_ratio(inst: CoverageInstance, seed: Sequence[int]) -> CoverageSolution:
    """Add sets by marginal weight per unit cost while they fit; a set that does not fit is dropped."""
    chosen = list(seed)
    covered: set[int] = set().union(*(inst.sets[i] for i in chosen)) if chosen else set()
    left = inst.budget - inst.cost(chosen)
    candidates = [i for i in range(len(inst.sets)) if i not in chosen]
    while candidates:
        best_i, best_ratio = -1, 0.0
        for i in candidates:
            gain = sum(inst.weights[u] for u in inst.sets[i] - covered)
            ratio = gain / inst.costs[i]
            if ratio > best_ratio:
                best_i, best_ratio = i, ratio
        if best_i < 0:
            break
        candidates.remove(best_i)
        if inst.costs[best_i] <= left:
            chosen.append(best_i)
            covered |= inst.sets[best_i]
            left -= inst.costs[best_i]
    return _solution(inst, chosen)


def _better(a: CoverageSolution, b: CoverageSolution) -> CoverageSolution:
    return b if b.value > a.value else a


def sock_design_greedy(
    inst: CoverageInstance, variant: Literal["enumerate", "simple"] = "enumerate"
) -> CoverageSolution:
    """Cost-benefit greedy for budgeted maximum coverage.

    ``simple`` returns the better of the ratio greedy and the best affordable single
    set. ``enumerate`` also tries every affordable pair and completes every affordable
    triple greedily, which carries the (1 - 1/e) guarantee.
    """
    n = len(inst.sets)
    best = _complete_by_ratio(inst, ())
    if variant == "simple":
        for i in range(n):
            if inst.costs[i] <= inst.budget:
                best = _better(best, _solution(inst, (i,)))
        return best

    for size in (1, 2):
        for combo in combinations(range(n), size):
            if inst.cost(combo) <= inst.budget:
                best = _better(best, _solution(inst, combo))
    for combo in combinations(range(n), 3):
        if inst.cost(combo) <= inst.budget:
            best = _better(best, _complete_by_ratio(inst, combo))
    return best


def brute_force_coverage(inst: CoverageInstance, *, max_sets: int = MAX_COVERAGE_SETS) -> CoverageSolution:
    n = len(inst.sets)
    if n > max_sets:
        msg = f"coverage instance has {n} sets, exhaustive search accepts at most {max_sets}"
        raise GuardExceededError(msg)
    best = _solution(inst, ())
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            if inst.cost(combo) <= inst.budget:
                best = _better(best, _solution(inst, combo))
    return best


@dataclass(frozen=True)
class SockDesignInstance:
    """One design per coverage set: price = set cost, feature set = set members."""

    prices: tuple[int, ...]
    feature_sets: tuple[frozenset[int], ...]
    weights: Mapping[int, float]
    budget: int

    def value(self, selection: Iterable[int]) -> float:
        return sock_design_value((self.feature_sets[i] for i in selection), self.weights)

    def affordable(self, selection: Iterable[int]) -> bool:
        return sum(self.prices[i] for i in selection) <= self.budget


def coverage_to_sock_design(inst: CoverageInstance) -> SockDesignInstance:
    return SockDesignInstance(
        prices=inst.costs,
        feature_sets=inst.sets,
        weights=dict(enumerate(inst.weights)),
        budget=inst.budget,
    )


def verify_coverage_equivalence(inst: CoverageInstance, *, max_sets: int = MAX_COVERAGE_SETS) -> bool:
    """Every selection has equal value and equal feasibility in both formulations."""
    n = len(inst.sets)
    if n > max_sets:
        msg = f"coverage instance has {n} sets, exhaustive check accepts at most {max_sets}"
        raise GuardExceededError(msg)
    design = coverage_to_sock_design(inst)
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            if abs(design.value(combo) - inst.value(combo)) > 1e-9:
                return False
            if design.affordable(combo) != (inst.cost(combo) <= inst.budget):
                return False
    return True
