from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from itertools import pairwise

logger = logging.getLogger(__name__)

Point = tuple[float, float]


def _sorted_by_cost(points: Sequence[Point]) -> list[int]:
    return sorted(range(len(points)), key=lambda i: (points[i][0], -points[i][1], i))


def knee_point(points: Sequence[Point]) -> int | None:
    """Index of the point ending the steepest savings-per-social-cost step.

    Points are (social cost increase, savings). Among points sharing a social
    cost only the one with the largest savings is considered. Returns ``None``
    when fewer than two distinct social-cost levels exist.
    """
    distinct: list[int] = []
    for i in _sorted_by_cost(points):
        if distinct and points[i][0] == points[distinct[-1]][0]:
            continue
        distinct.append(i)
    if len(distinct) < 2:
        logger.warning("Knee point undefined: %d distinct social-cost levels", len(distinct))
        return None

    best: int | None = None
    best_ratio = -math.inf
    for a, b in pairwise(distinct):
        ratio = (points[b][1] - points[a][1]) / (points[b][0] - points[a][0])
        if ratio > best_ratio:
            best_ratio, best = ratio, b
    return best


def pareto_front(points: Sequence[Point]) -> list[int]:
    """Indices of points not dominated under (lower social cost, higher savings), ordered by social cost."""
    front: list[int] = []
    best_savings = -math.inf
    for i in _sorted_by_cost(points):
        soc, sav = points[i]
        if sav > best_savings:
            front.append(i)
            best_savings = sav
        elif front and points[front[-1]] == (soc, sav):
            front.append(i)
    return front


def dominates(p: Point, q: Point) -> bool:
    return p[0] <= q[0] and p[1] >= q[1] and (p[0] < q[0] or p[1] > q[1])
