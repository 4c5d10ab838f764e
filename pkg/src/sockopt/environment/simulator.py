from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, overload

from sockopt.catalogue.generate import build_catalogue
from sockopt.environment.dynamics import DayContext, initial_purchase, step_day
from sockopt.environment.models import SimState, SockInstance, make_instance
from sockopt.environment.rng import StreamFactory, catalogue_generator
from sockopt.metrics.costs import dispersion, diversity, diversity_utility
from sockopt.metrics.models import RunMetrics, RunTrace
from sockopt.metrics.stranded import stranded_capacity
from sockopt.policies.factory import build_policy

if TYPE_CHECKING:
    from sockopt.catalogue.models import Catalogue, SockDesign
    from sockopt.environment.models import SimConfig
    from sockopt.policies.base import PairingPolicy

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    metrics: RunMetrics
    trace: RunTrace
    state: SimState


def catalogue_for(config: SimConfig) -> Catalogue:
    """The catalogue a config describes; generated catalogues derive their seed from the master seed."""
    spec = config.catalogue
    if spec.path is None and spec.seed is None:
        return build_catalogue(spec, catalogue_generator(config.seed))
    return build_catalogue(spec)


def _diversity_term(config: SimConfig, socks: Sequence[SockInstance]) -> float:
    return diversity_utility(socks, config.agent.delta, config.diversity)


def simulate(
    config: SimConfig,
    *,
    catalogue: Catalogue | None = None,
    replication: int = 0,
    policy: PairingPolicy | None = None,
    initial_designs: Sequence[SockDesign] | None = None,
    keep_days: bool = False,
) -> RunOutcome:
    """One sample path: initial purchase, then ``config.T`` days.

    ``initial_designs`` replaces the budgeted purchase with one sock per listed
    design (bundle simulations); the catalogue is then only used for replenishment.
    """
    streams = StreamFactory(config.seed, replication)
    policy = policy or build_policy(config.policy)
    state = SimState(budget_remaining=config.agent.b)

    if initial_designs is not None:
        state.inventory = [
            make_instance(state.allocate_id(), design, theta=config.theta, d=config.d) for design in initial_designs
        ]
        state.purchased = len(state.inventory)
    else:
        if catalogue is None:
            catalogue = catalogue_for(config)
        bought, _ = initial_purchase(
            catalogue,
            config.agent,
            streams.purchase,
            theta=config.theta,
            d=config.d,
            rounding=config.rounding,
            state=state,
        )
        state.inventory = bought

    trace = RunTrace(initial_spend=state.spend, initial_eco=state.eco)
    state.reward -= state.spend + config.agent.lam * state.eco
    diversity_initial = (diversity if config.diversity == "shannon" else dispersion)(state.inventory)
    if "start" in config.diversity_times:
        trace.diversity_terms["start"] = _diversity_term(config, state.inventory)

    ctx = DayContext(
        config=config,
        policy=policy,
        catalogue=catalogue,
        exposure_rng=streams.exposure,
        wash_rng=streams.wash,
    )
    for _ in range(config.T):
        _, record = step_day(state, ctx)
        if keep_days:
            trace.days.append(record)

    if "end" in config.diversity_times:
        trace.diversity_terms["end"] = _diversity_term(config, state.owned)
    state.reward += sum(trace.diversity_terms.values())

    trace.lost = list(state.lost)
    trace.final_socks = state.owned
    stranded = stranded_capacity(trace, policy)
    metrics = RunMetrics(
        socks_purchased=state.purchased,
        money=state.spend,
        eco=state.eco,
        social=state.social,
        infeasible_days=state.infeasible_days,
        stranded=stranded.total,
        stranded_loss=stranded.loss,
        stranded_orphan=stranded.orphan,
        total_wears=state.wears,
        reward_total=state.reward,
        worn_out=len(state.worn_out),
        lost=len(state.lost),
        diversity_initial=diversity_initial,
    )
    logger.debug("Replication %d of %s: %s", replication, config.policy.label, metrics)
    return RunOutcome(metrics=metrics, trace=trace, state=state)


@overload
def run(
    config: SimConfig, *, catalogue: Catalogue | None = ..., replication: int = ..., trace: Literal[False] = ...
) -> RunMetrics: ...


@overload
def run(
    config: SimConfig, *, catalogue: Catalogue | None = ..., replication: int = ..., trace: Literal[True]
) -> tuple[RunMetrics, RunTrace]: ...


def run(
    config: SimConfig,
    *,
    catalogue: Catalogue | None = None,
    replication: int = 0,
    trace: bool = False,
) -> RunMetrics | tuple[RunMetrics, RunTrace]:
    """Run one replication; with ``trace=True`` also return the per-day trace."""
    outcome = simulate(config, catalogue=catalogue, replication=replication, keep_days=trace)
    if trace:
        return outcome.metrics, outcome.trace
    return outcome.metrics
