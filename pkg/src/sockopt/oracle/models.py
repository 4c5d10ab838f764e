"""Instances for the exact solvers. Compatibility values are exact rationals."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from sockopt.catalogue.models import SockDesign
from sockopt.errors import InvalidInputError

Number = int | Fraction


def as_fraction(value: int | float | str | Fraction) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(value)


@dataclass(frozen=True)
class SockPlanInstance:
    """Socks for sale one by one, their pairwise compatibility, and the horizon.

    ``required`` socks must be part of every purchase. ``threshold`` is the decision
    target K; ``None`` marks an instance whose target is undefined.
    """

    prices: tuple[Fraction, ...]
    xi: tuple[tuple[Fraction, ...], ...]
    theta: tuple[int, ...]
    T: int
    kappa: int
    budget: Fraction
    threshold: Fraction | None = None
    d: tuple[Fraction, ...] = ()
    required: frozenset[int] = frozenset()
    labels: tuple[str, ...] = ()
    designs: tuple[SockDesign, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.prices)
        if len(self.xi) != n or any(len(row) != n for row in self.xi):
            msg = f"xi table must be {n}x{n}"
            raise InvalidInputError(msg)
        for i in range(n):
            for j in range(i + 1, n):
                if self.xi[i][j] != self.xi[j][i]:
                    msg = f"xi table is not symmetric at ({i}, {j})"
                    raise InvalidInputError(msg)
                if not 0 <= self.xi[i][j] <= 1:
                    msg = f"xi({i}, {j}) = {self.xi[i][j]} outside [0, 1]"
                    raise InvalidInputError(msg)
        if len(self.theta) != n or any(t < 1 for t in self.theta):
            msg = "theta needs one value >= 1 per sock"
            raise InvalidInputError(msg)
        if self.d and (len(self.d) != n or any(p != 0 for p in self.d)):
            msg = "exact solving assumes deterministic washes (d = 0 for every sock)"
            raise InvalidInputError(msg)
        if any(p < 0 for p in self.prices) or self.budget < 0:
            msg = "prices and budget must be >= 0"
            raise InvalidInputError(msg)
        if self.T < 0 or self.kappa < 1:
            msg = f"need T >= 0 and kappa >= 1, got T={self.T}, kappa={self.kappa}"
            raise InvalidInputError(msg)
        if any(not 0 <= i < n for i in self.required):
            msg = "required sock index out of range"
            raise InvalidInputError(msg)
        if self.designs is not None and len(self.designs) != n:
            msg = "designs must align with the socks"
            raise InvalidInputError(msg)

    @property
    def n(self) -> int:
        return len(self.prices)

    @classmethod
    def build(
        cls,
        prices: Sequence[int | float | str | Fraction],
        xi: Sequence[Sequence[int | float | str | Fraction]],
        *,
        theta: int | Sequence[int],
        T: int,
        kappa: int,
        budget: int | float | str | Fraction,
        threshold: int | float | str | Fraction | None = None,
        required: Sequence[int] = (),
        labels: Sequence[str] = (),
        designs: Sequence[SockDesign] | None = None,
    ) -> SockPlanInstance:
        n = len(prices)
        thetas = (theta,) * n if isinstance(theta, int) else tuple(theta)
        return cls(
            prices=tuple(as_fraction(p) for p in prices),
            xi=tuple(tuple(as_fraction(x) for x in row) for row in xi),
            theta=thetas,
            T=T,
            kappa=kappa,
            budget=as_fraction(budget),
            threshold=None if threshold is None else as_fraction(threshold),
            d=(Fraction(0),) * n,
            required=frozenset(required),
            labels=tuple(labels) or tuple(f"s{i}" for i in range(n)),
            designs=None if designs is None else tuple(designs),
        )


@dataclass(frozen=True)
class SockPlanSolution:
    value: Fraction
    purchase: tuple[int, ...]
    schedule: tuple[tuple[int, int] | None, ...]
    spend: Fraction = Fraction(0)

    def meets(self, threshold: Fraction | None) -> bool:
        return threshold is not None and self.value >= threshold


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple[tuple[int, int], ...]
    capacity: int
    target: int

    def __post_init__(self) -> None:
        if self.capacity < 0 or self.target < 0 or any(w < 0 or v < 0 for w, v in self.items):
            msg = "knapsack weights, values, capacity and target must be integers >= 0"
            raise InvalidInputError(msg)

    @property
    def total_value(self) -> int:
        return sum(v for _, v in self.items)


@dataclass(frozen=True)
class CoverageInstance:
    """Weighted universe ``0..len(weights)-1``, candidate sets with integer costs, budget."""

    weights: tuple[float, ...]
    sets: tuple[frozenset[int], ...]
    costs: tuple[int, ...]
    budget: int
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.sets) != len(self.costs):
            msg = "every set needs a cost"
            raise InvalidInputError(msg)
        if any(w < 0 for w in self.weights):
            msg = "element weights must be >= 0"
            raise InvalidInputError(msg)
        if any(c < 1 for c in self.costs):
            msg = "set costs must be >= 1"
            raise InvalidInputError(msg)
        m = len(self.weights)
        if any(not 0 <= u < m for s in self.sets for u in s):
            msg = "set element outside the universe"
            raise InvalidInputError(msg)

    def value(self, selection: Sequence[int]) -> float:
        covered: set[int] = set()
        for i in selection:
            covered |= self.sets[i]
        return float(sum(self.weights[u] for u in covered))

    def cost(self, selection: Sequence[int]) -> int:
        return sum(self.costs[i] for i in selection)
