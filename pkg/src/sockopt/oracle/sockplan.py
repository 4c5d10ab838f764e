"""Exhaustive Sock-Plan solver for tiny deterministic instances.

Socks that are interchangeable (same price, wear limit and compatibility with
every other sock) are grouped into classes, purchases are enumerated as
maximal class-count vectors, and the daily schedule is a memoised search over
(day, clean multiset, laundry multiset). Concrete sock indices are recovered
afterwards.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from sockopt.app.settings import AgentConfig, SimulationConfig
from sockopt.catalogue.models import SockDesign
from sockopt.catalogue.similarity import mismatch_count
from sockopt.environment.dynamics import DayContext, step_day
from sockopt.environment.models import SimState, SockInstance
from sockopt.environment.rng import stream_generator
from sockopt.errors import GuardExceededError, InvalidInputError
from sockopt.oracle.models import SockPlanInstance, SockPlanSolution, as_fraction

if TYPE_CHECKING:
    from sockopt.policies.base import PairingPolicy

logger = logging.getLogger(__name__)

MAX_SOCK_CLASSES = 12
MAX_SOCKS = 32
MAX_HORIZON = 6

# (class index, remaining wears)
Entry = tuple[int, int]
Multiset = tuple[Entry, ...]


@dataclass(frozen=True)
class SockClass:
    members: tuple[int, ...]
    price: Fraction
    theta: int
    required: bool

    @property
    def size(self) -> int:
        return len(self.members)


def _interchangeable(inst: SockPlanInstance, i: int, j: int) -> bool:
    if inst.prices[i] != inst.prices[j] or inst.theta[i] != inst.theta[j]:
        return False
    if (i in inst.required) != (j in inst.required):
        return False
    return all(inst.xi[i][k] == inst.xi[j][k] for k in range(inst.n) if k not in (i, j))


def sock_classes(inst: SockPlanInstance) -> list[SockClass]:
    """Partition of the socks into interchangeable classes, ordered by first member."""
    groups: list[list[int]] = []
    for i in range(inst.n):
        for group in groups:
            if _interchangeable(inst, group[0], i):
                group.append(i)
                break
        else:
            groups.append([i])
    return [
        SockClass(members=tuple(g), price=inst.prices[g[0]], theta=inst.theta[g[0]], required=g[0] in inst.required)
        for g in groups
    ]


def maximal_purchases(classes: Sequence[SockClass], budget: Fraction) -> Iterator[tuple[int, ...]]:
    """Class-count vectors within budget to which no further sock can be added."""
    forced = sum((c.price * c.size for c in classes if c.required), Fraction(0))
    if forced > budget:
        msg = f"required socks cost {forced}, above the budget {budget}"
        raise InvalidInputError(msg)

    counts = [c.size if c.required else 0 for c in classes]

    def rec(idx: int, left: Fraction) -> Iterator[tuple[int, ...]]:
        if idx == len(classes):
            if all(counts[i] == c.size or c.price > left for i, c in enumerate(classes)):
                yield tuple(counts)
            return
        c = classes[idx]
        if c.required:
            yield from rec(idx + 1, left)
            return
        top = c.size if c.price == 0 else min(c.size, int(left // c.price))
        for x in range(top, -1, -1):
            counts[idx] = x
            yield from rec(idx + 1, left - x * c.price)
        counts[idx] = 0

    yield from rec(0, budget - forced)


@dataclass
class _Search:
    classes: list[SockClass]
    values: list[list[Fraction]]
    T: int
    kappa: int
    memo: dict[tuple[int, Multiset, Multiset | None], Fraction] = field(default_factory=dict)

    def laundry_key(self, day: int, laundry: Multiset | None) -> Multiset | None:
        # the laundry only matters while a wash can still happen
        if laundry is None or len(laundry) + 2 * (self.T - day) < self.kappa:
            return None
        return laundry

    def moves(self, day: int, clean: Multiset, laundry: Multiset | None) -> Iterator[tuple[Fraction, Entry, Entry]]:
        counts = Counter(clean)
        distinct = sorted(counts)
        no_wash = laundry is None
        for a_pos, a in enumerate(distinct):
            for b in distinct[a_pos:]:
                if a == b and counts[a] < 2:
                    continue
                value = self.values[a[0]][b[0]]
                # without future washes a zero-value pair only removes socks; idling dominates it
                if no_wash and value == 0:
                    continue
                yield value, a, b

    def apply(
        self, day: int, clean: Multiset, laundry: Multiset | None, a: Entry, b: Entry
    ) -> tuple[Multiset, Multiset | None]:
        rest = list(clean)
        rest.remove(a)
        rest.remove(b)
        worn = [(c, r - 1) for c, r in (a, b) if r > 1]
        if laundry is None:
            return tuple(rest), self.laundry_key(day + 1, None)
        dirty = [*laundry, *worn]
        if len(dirty) >= self.kappa:
            return tuple(sorted(rest + dirty)), self.laundry_key(day + 1, ())
        return tuple(rest), self.laundry_key(day + 1, tuple(sorted(dirty)))

    def best(self, day: int, clean: Multiset, laundry: Multiset | None) -> Fraction:
        if day == self.T:
            return Fraction(0)
        key = (day, clean, laundry)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        value = self.best(day + 1, clean, self.laundry_key(day + 1, laundry))
        for gain, a, b in self.moves(day, clean, laundry):
            nxt_clean, nxt_laundry = self.apply(day, clean, laundry, a, b)
            value = max(value, gain + self.best(day + 1, nxt_clean, nxt_laundry))
        self.memo[key] = value
        return value


def _check_guards(inst: SockPlanInstance, classes: Sequence[SockClass], max_classes: int, max_socks: int, max_horizon: int) -> None:
    if inst.n > max_socks:
        msg = f"instance has {inst.n} socks, the exact solver accepts at most {max_socks}"
        raise GuardExceededError(msg)
    if len(classes) > max_classes:
        msg = f"instance has {len(classes)} distinct sock classes, the exact solver accepts at most {max_classes}"
        raise GuardExceededError(msg)
    if inst.T > max_horizon:
        msg = f"horizon {inst.T} exceeds the exact solver limit {max_horizon}"
        raise GuardExceededError(msg)


def brute_force_sockplan(
    inst: SockPlanInstance,
    *,
    max_classes: int = MAX_SOCK_CLASSES,
    max_socks: int = MAX_SOCKS,
    max_horizon: int = MAX_HORIZON,
) -> SockPlanSolution:
    """Exact maximum of total daily compatibility over purchases within budget and schedules.

    Days may be left idle. Among optimal plans the first purchase in enumeration
    order (largest counts of earlier classes first) is returned.
    """
    classes = sock_classes(inst)
    _check_guards(inst, classes, max_classes, max_socks, max_horizon)

    values = [[Fraction(0)] * len(classes) for _ in classes]
    for a, ca in enumerate(classes):
        for b, cb in enumerate(classes):
            if a != b:
                values[a][b] = inst.xi[ca.members[0]][cb.members[0]]
            elif ca.size > 1:
                values[a][a] = inst.xi[ca.members[0]][ca.members[1]]
    search = _Search(classes=classes, values=values, T=inst.T, kappa=inst.kappa)

    best_value = Fraction(-1)
    best_counts: tuple[int, ...] = ()
    n_purchases = 0
    for counts in maximal_purchases(classes, inst.budget):
        n_purchases += 1
        clean = tuple(sorted((c, classes[c].theta) for c, x in enumerate(counts) for _ in range(x)))
        value = search.best(0, clean, search.laundry_key(0, ()))
        if value > best_value:
            best_value, best_counts = value, counts
    logger.debug(
        "Sock-Plan search: %d classes, %d maximal purchases, %d memo entries",
        len(classes),
        n_purchases,
        len(search.memo),
    )
    return _recover(inst, classes, search, best_counts, best_value)


def _recover(
    inst: SockPlanInstance, classes: Sequence[SockClass], search: _Search, counts: tuple[int, ...], value: Fraction
) -> SockPlanSolution:
    purchase = sorted(m for c, x in enumerate(counts) for m in classes[c].members[:x])
    cls_of = {m: c for c, cl in enumerate(classes) for m in cl.members}
    # concrete socks: index -> remaining wears
    clean_socks = {m: inst.theta[m] for m in purchase}
    dirty_socks: dict[int, int] = {}

    def entries(socks: dict[int, int]) -> Multiset:
        return tuple(sorted((cls_of[m], r) for m, r in socks.items()))

    def take(entry: Entry) -> int:
        c, r = entry
        sock = min(m for m, rem in clean_socks.items() if cls_of[m] == c and rem == r)
        del clean_socks[sock]
        return sock

    schedule: list[tuple[int, int] | None] = []
    laundry: Multiset | None = search.laundry_key(0, ())
    for day in range(inst.T):
        clean = entries(clean_socks)
        target = search.best(day, clean, laundry)
        chosen: tuple[Entry, Entry] | None = None
        for gain, a, b in search.moves(day, clean, laundry):
            nxt_clean, nxt_laundry = search.apply(day, clean, laundry, a, b)
            if gain + search.best(day + 1, nxt_clean, nxt_laundry) == target:
                chosen = (a, b)
                laundry = nxt_laundry
                break
        if chosen is None:
            schedule.append(None)
            laundry = search.laundry_key(day + 1, laundry)
            continue
        picked = [(take(entry), entry[1]) for entry in chosen]
        first, second = sorted(sock for sock, _ in picked)
        schedule.append((first, second))
        for sock, remaining in picked:
            if remaining > 1:
                dirty_socks[sock] = remaining - 1
        if len(dirty_socks) >= inst.kappa:
            clean_socks.update(dirty_socks)
            dirty_socks.clear()

    spend = sum((inst.prices[m] for m in purchase), Fraction(0))
    return SockPlanSolution(value=value, purchase=tuple(purchase), schedule=tuple(schedule), spend=spend)


def sockplan_from_catalogue(
    designs: Sequence[SockDesign],
    *,
    T: int,
    kappa: int,
    budget: int | float | Fraction,
    theta: int | Sequence[int] = 1,
    copies: int = 2,
) -> SockPlanInstance:
    """Sock-Plan instance selling ``copies`` socks of every design at the design price.

    Compatibility is the exact fraction of matching features.
    """
    if not designs:
        msg = "need at least one design"
        raise InvalidInputError(msg)
    socks = [design for design in designs for _ in range(copies)]
    k = len(socks[0].features)
    xi = [
        [Fraction(0) if i == j else Fraction(k - mismatch_count(a.features, b.features), k) for j, b in enumerate(socks)]
        for i, a in enumerate(socks)
    ]
    thetas = [theta] * len(socks) if isinstance(theta, int) else [t for t in theta for _ in range(copies)]
    return SockPlanInstance.build(
        [as_fraction(s.price) for s in socks],
        xi,
        theta=thetas,
        T=T,
        kappa=kappa,
        budget=budget,
        labels=[f"{s.design_id}#{n % copies}" for n, s in enumerate(socks)],
        designs=socks,
    )


def evaluate_policy_on_instance(
    inst: SockPlanInstance,
    policy: PairingPolicy,
    purchase: Sequence[int] | None = None,
    *,
    seed: int = 0,
) -> Fraction:
    """Total compatibility a policy collects when it schedules ``purchase`` under deterministic washes.

    Without an explicit purchase the oracle's optimal purchase is used.
    """
    if inst.designs is None:
        msg = "policies need sock features; build the instance with designs"
        raise InvalidInputError(msg)
    if purchase is None:
        purchase = brute_force_sockplan(inst).purchase
    if inst.T == 0 or not purchase:
        return Fraction(0)

    config = SimulationConfig(
        T=inst.T,
        kappa=inst.kappa,
        theta=max(inst.theta),
        d=0.0,
        agent=AgentConfig(b=0.0, rho=0.0),
        replenishment=False,
        wash_when_short=False,
        seed=seed,
    )
    state = SimState(budget_remaining=0.0, purchased=len(purchase), next_id=inst.n)
    # instance theta counts wears; a simulated sock takes one more wear than its theta
    state.inventory = [
        SockInstance(instance_id=i, design=inst.designs[i], theta=inst.theta[i] - 1, d=0.0) for i in purchase
    ]
    ctx = DayContext(
        config=config,
        policy=policy,
        catalogue=None,
        exposure_rng=stream_generator(seed, 0, "exposure"),
        wash_rng=stream_generator(seed, 0, "wash"),
    )
    total = Fraction(0)
    for _ in range(inst.T):
        _, record = step_day(state, ctx)
        if record.pair is not None:
            a, b = record.pair
            total += inst.xi[a][b]
    return total
