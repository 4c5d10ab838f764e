from sockopt.environment.dynamics import (
    DayContext,
    active_subset_size,
    choose_replenishment,
    initial_purchase,
    replenish,
    step_day,
    wash,
)
from sockopt.environment.models import AgentParams, SimConfig, SimState, SockInstance, make_instance
from sockopt.environment.rng import StreamFactory, catalogue_generator, stream_generator
from sockopt.environment.simulator import RunOutcome, catalogue_for, run, simulate

__all__ = [
    "AgentParams",
    "DayContext",
    "RunOutcome",
    "SimConfig",
    "SimState",
    "SockInstance",
    "StreamFactory",
    "active_subset_size",
    "catalogue_for",
    "catalogue_generator",
    "choose_replenishment",
    "initial_purchase",
    "make_instance",
    "replenish",
    "run",
    "simulate",
    "step_day",
    "stream_generator",
    "wash",
]
