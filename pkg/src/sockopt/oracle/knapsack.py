"""Knapsack exact solver and its reduction to a Sock-Plan instance."""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from sockopt.errors import GuardExceededError
from sockopt.oracle.models import KnapsackInstance, SockPlanInstance

logger = logging.getLogger(__name__)

MAX_KNAPSACK_ITEMS = 20


def solve_knapsack_exact(k: KnapsackInstance, *, max_items: int = MAX_KNAPSACK_ITEMS) -> int:
    """Largest total value within capacity, by dynamic programming over capacity."""
    if len(k.items) > max_items:
        msg = f"knapsack has {len(k.items)} items, the exact solver accepts at most {max_items}"
        raise GuardExceededError(msg)
    best = np.zeros(k.capacity + 1, dtype=np.int64)
    for w, v in k.items:
        if w > k.capacity:
            continue
        nxt = best.copy()
        nxt[w:] = np.maximum(best[w:], best[: k.capacity + 1 - w] + v)
        best = nxt
    return int(best[k.capacity])


def knapsack_to_sockplan(k: KnapsackInstance) -> SockPlanInstance:
    """Two socks per item that only match each other, plus 2n free-standing filler socks.

    Item socks cost w_i each and their pair is worth v_i / V_tot. Fillers cost 1 and
    are a mandatory purchase, so the remaining budget 2W buys exactly the item pairs
    of a knapsack selection. The horizon has one day per item and the laundry never
    fills. With V_tot = 0 the threshold is 0 when the target is 0 and undefined otherwise.
    """
    n = len(k.items)
    total = k.total_value
    size = 4 * n
    xi = [[Fraction(0)] * size for _ in range(size)]
    prices: list[Fraction] = []
    labels: list[str] = []
    for i, (w, v) in enumerate(k.items):
        left, right = 2 * i, 2 * i + 1
        value = Fraction(v, total) if total else Fraction(0)
        xi[left][right] = xi[right][left] = value
        prices += [Fraction(w), Fraction(w)]
        labels += [f"item{i}_L", f"item{i}_R"]
    fillers = range(2 * n, 4 * n)
    prices += [Fraction(1)] * (2 * n)
    labels += [f"filler{j}" for j in range(2 * n)]

    if total:
        threshold: Fraction | None = Fraction(k.target, total)
    elif k.target == 0:
        threshold = Fraction(0)
    else:
        logger.warning("Knapsack with zero total value and target %d: threshold undefined", k.target)
        threshold = None

    return SockPlanInstance(
        prices=tuple(prices),
        xi=tuple(tuple(row) for row in xi),
        theta=(1,) * size,
        T=n,
        kappa=2 * n + 1,
        budget=Fraction(2 * k.capacity + 2 * n),
        threshold=threshold,
        d=(Fraction(0),) * size,
        required=frozenset(fillers),
        labels=tuple(labels),
    )
