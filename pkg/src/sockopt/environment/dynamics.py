"""One simulated day and the purchase/wash steps around it.

Step order per day: exposure draw, an early wash of the partial buffer when
fewer than two clean socks remain, pair selection (with a replenishment
purchase first when the policy finds nothing and purchasing is allowed), wear
and wear-out once tau exceeds theta, move to laundry, wash once the buffer
holds ``kappa`` socks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from sockopt.environment.models import SimState, SockInstance, make_instance
from sockopt.metrics.costs import social_cost
from sockopt.metrics.models import DayRecord
from sockopt.policies.pairs import PairTable

if TYPE_CHECKING:
    from sockopt.app.settings import ReplenishmentRule, RoundingRule
    from sockopt.catalogue.models import Catalogue
    from sockopt.environment.models import AgentParams, SimConfig
    from sockopt.policies.base import PairingPolicy
    from sockopt.policies.pairs import PairChoice

logger = logging.getLogger(__name__)


def _round(x: float, rule: RoundingRule) -> int:
    if rule == "half_even":
        return round(x)
    if rule == "half_up":
        return math.floor(x + 0.5)
    return math.floor(x)


def active_subset_size(delta: float, n_designs: int, rounding: RoundingRule = "half_even") -> int:
    """1 + round(delta * (n - 1)), with delta clipped to [0, 1]."""
    delta = min(max(delta, 0.0), 1.0)
    return 1 + _round(delta * (n_designs - 1), rounding)


def _buy_pair(state: SimState, catalogue: Catalogue, index: int, *, theta: int, d: float) -> list[SockInstance]:
    design = catalogue[index]
    cost = 2 * design.price
    bought = [make_instance(state.allocate_id(), design, theta=theta, d=d) for _ in range(2)]
    state.budget_remaining -= cost
    state.spend += cost
    state.eco += 2 * design.eco
    state.purchased += 2
    return bought


def initial_purchase(
    catalogue: Catalogue,
    agent: AgentParams,
    rng: np.random.Generator,
    *,
    theta: int,
    d: float,
    rounding: RoundingRule = "half_even",
    state: SimState | None = None,
) -> tuple[list[SockInstance], float]:
    """Buy pairs of uniformly drawn active designs until no active design is affordable.

    When ``state`` is given, budget, counters and instance ids are taken from it and
    updated in place.
    """
    if state is None:
        state = SimState(budget_remaining=agent.b)
    if len(catalogue) == 0:
        return [], 0.0
    size = active_subset_size(agent.delta, len(catalogue), rounding)
    active = rng.choice(len(catalogue), size=size, replace=False)
    active_prices = catalogue.prices[active]

    spend_before = state.spend
    bought: list[SockInstance] = []
    while True:
        affordable = active[2 * active_prices <= state.budget_remaining]
        if affordable.size == 0:
            break
        pick = int(affordable[rng.integers(affordable.size)])
        bought.extend(_buy_pair(state, catalogue, pick, theta=theta, d=d))
    logger.debug("Initial purchase: %d socks over %d active designs", len(bought), size)
    return bought, state.spend - spend_before


def wash(laundry: list[SockInstance], rng: np.random.Generator) -> tuple[list[SockInstance], list[SockInstance]]:
    """Each sock comes back with probability 1 - d, one uniform draw per sock."""
    if not laundry:
        return [], []
    u = rng.random(len(laundry))
    returned = [s for s, draw in zip(laundry, u, strict=True) if draw >= s.d]
    lost = [s for s, draw in zip(laundry, u, strict=True) if draw < s.d]
    return returned, lost


def _mean_eta_to_owned(catalogue: Catalogue, candidates: np.ndarray, owned: list[SockInstance]) -> np.ndarray:
    if not owned:
        return np.zeros(candidates.size)
    owned_feats = np.array([s.features for s in owned], dtype=np.int64)
    cand_feats = catalogue.features[candidates]
    return (cand_feats[:, None, :] != owned_feats[None, :, :]).mean(axis=2).mean(axis=1)


def choose_replenishment(
    state: SimState, catalogue: Catalogue, agent: AgentParams, rule: ReplenishmentRule = "cheapest_match"
) -> int | None:
    """Catalogue index of the design to buy twice, or None when no pair is affordable."""
    candidates = np.flatnonzero(2 * catalogue.prices <= state.budget_remaining)
    if candidates.size == 0:
        return None
    prices = catalogue.prices[candidates]
    mean_eta = _mean_eta_to_owned(catalogue, candidates, state.owned)
    if rule == "cheapest_match":
        keys: tuple[np.ndarray, ...] = (candidates, mean_eta, prices)
    elif rule == "exposure_aware":
        expected_social = agent.rho * agent.chi * mean_eta**agent.gamma
        keys = (candidates, prices, expected_social)
    else:
        keys = (candidates, prices, mean_eta)
    return int(candidates[np.lexsort(keys)[0]])


def replenish(
    state: SimState,
    catalogue: Catalogue,
    agent: AgentParams,
    *,
    theta: int,
    d: float,
    rule: ReplenishmentRule = "cheapest_match",
) -> list[SockInstance]:
    """Buy two instances of one design into the inventory; closes purchasing for good when nothing fits."""
    if state.purchasing_closed:
        return []
    index = choose_replenishment(state, catalogue, agent, rule)
    if index is None:
        state.purchasing_closed = True
        logger.debug("Day %d: no affordable pair left, purchasing closed", state.day)
        return []
    bought = _buy_pair(state, catalogue, index, theta=theta, d=d)
    state.inventory.extend(bought)
    return bought


@dataclass
class DayContext:
    """Fixed inputs of a run that every day needs."""

    config: SimConfig
    policy: PairingPolicy
    catalogue: Catalogue | None
    exposure_rng: np.random.Generator
    wash_rng: np.random.Generator


def _select(ctx: DayContext, state: SimState) -> PairChoice:
    return ctx.policy.select_from(PairTable.build(state.inventory), ctx.config.agent)


def _wash_buffer(state: SimState, ctx: DayContext) -> tuple[int, int]:
    """Wash the whole laundry buffer into the inventory; returns (washed, lost)."""
    washed = len(state.laundry)
    returned, lost = wash(state.laundry, ctx.wash_rng)
    state.laundry = []
    state.inventory.extend(returned)
    state.lost.extend(lost)
    return washed, len(lost)


def step_day(state: SimState, ctx: DayContext) -> tuple[SimState, DayRecord]:
    """Advance ``state`` by one day in place and return it with the day's record."""
    config = ctx.config
    agent = config.agent
    state.day += 1
    z = int(ctx.exposure_rng.random() < agent.rho)

    washed = lost_count = 0
    if config.wash_when_short and len(state.inventory) < 2 and state.laundry:
        # nothing left to pair: the partial buffer goes in before anything is bought
        washed, lost_count = _wash_buffer(state, ctx)

    spend_before, eco_before = state.spend, state.eco
    purchased: list[SockInstance] = []
    choice = _select(ctx, state)
    if choice.is_empty and config.replenishment and ctx.catalogue is not None:
        purchased = replenish(
            state, ctx.catalogue, agent, theta=config.theta, d=config.d, rule=config.replenishment_rule
        )
        if purchased:
            choice = _select(ctx, state)
    spend, eco = state.spend - spend_before, state.eco - eco_before
    bought_ids = tuple(s.instance_id for s in purchased)

    if choice.socks is None:
        state.infeasible_days += 1
        state.reward -= spend + agent.lam * eco
        record = DayRecord(
            day=state.day,
            feasible=False,
            z=z,
            purchased=bought_ids,
            spend=spend,
            eco=eco,
            washed=washed,
            lost=lost_count,
        )
        return state, record

    assert choice.eta is not None
    cost = social_cost(choice.eta, agent.chi, z, agent.gamma)
    worn = choice.socks
    worn_ids = {s.instance_id for s in worn}
    state.inventory = [s for s in state.inventory if s.instance_id not in worn_ids]
    worn_out = 0
    for sock in worn:
        sock.tau += 1
        # tau == theta is still wearable; the wear that takes it past theta retires it
        if sock.tau > sock.theta:
            state.worn_out.append(sock)
            worn_out += 1
        else:
            state.laundry.append(sock)
    state.wears += 2
    state.social += cost

    if len(state.laundry) >= config.kappa:
        batch, batch_lost = _wash_buffer(state, ctx)
        washed += batch
        lost_count += batch_lost

    state.reward -= spend + agent.lam * eco + cost
    record = DayRecord(
        day=state.day,
        feasible=True,
        z=z,
        pair=choice.ids,
        eta=choice.eta,
        social_cost=cost,
        purchased=bought_ids,
        spend=spend,
        eco=eco,
        washed=washed,
        lost=lost_count,
        worn_out=worn_out,
    )
    return state, record
