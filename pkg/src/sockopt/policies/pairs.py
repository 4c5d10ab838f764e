from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from sockopt.environment.models import SockInstance

# slack for threshold comparisons on eta = count / k
TOL = 1e-12


@dataclass(frozen=True, slots=True)
class PairChoice:
    socks: tuple[SockInstance, SockInstance] | None = None
    xi: float | None = None
    eta: float | None = None

    @property
    def is_empty(self) -> bool:
        return self.socks is None

    @property
    def ids(self) -> tuple[int, int] | None:
        if self.socks is None:
            return None
        return (self.socks[0].instance_id, self.socks[1].instance_id)


NO_PAIR = PairChoice()


@dataclass(frozen=True)
class PairTable:
    """Every unordered pair of distinct socks with its mismatch and tie-break keys.

    Rows follow ``np.triu_indices`` order. Ranking is by (higher score, lower eta,
    lower combined remaining wears, lower instance ids).
    """

    socks: Sequence[SockInstance]
    first: NDArray[np.intp]
    second: NDArray[np.intp]
    eta: NDArray[np.float64]
    xi: NDArray[np.float64]
    remaining: NDArray[np.int64]
    id_low: NDArray[np.int64]
    id_high: NDArray[np.int64]
    instance_ids: NDArray[np.int64]

    @classmethod
    def build(cls, socks: Sequence[SockInstance]) -> PairTable:
        n = len(socks)
        ids = np.fromiter((s.instance_id for s in socks), dtype=np.int64, count=n)
        first, second = np.triu_indices(n, 1)
        if n < 2:
            empty_f = np.zeros(0, dtype=np.float64)
            empty_i = np.zeros(0, dtype=np.int64)
            return cls(socks, first, second, empty_f, empty_f, empty_i, empty_i, empty_i, ids)
        feats = np.array([s.features for s in socks], dtype=np.int64)
        k = feats.shape[1]
        counts = (feats[first] != feats[second]).sum(axis=1)
        eta = counts / k
        rem = np.fromiter((s.remaining for s in socks), dtype=np.int64, count=n)
        return cls(
            socks=socks,
            first=first,
            second=second,
            eta=eta,
            xi=1.0 - eta,
            remaining=rem[first] + rem[second],
            id_low=np.minimum(ids[first], ids[second]),
            id_high=np.maximum(ids[first], ids[second]),
            instance_ids=ids,
        )

    def __len__(self) -> int:
        return int(self.first.size)

    def ranking(self, score: NDArray[np.float64]) -> NDArray[np.intp]:
        return np.lexsort((self.id_high, self.id_low, self.remaining, self.eta, -score))

    def best(self, score: NDArray[np.float64], mask: NDArray[np.bool_] | None = None) -> int | None:
        if len(self) == 0:
            return None
        order = self.ranking(score)
        if mask is not None:
            order = order[mask[order]]
        return int(order[0]) if order.size else None

    def choice(self, row: int | None) -> PairChoice:
        if row is None:
            return NO_PAIR
        i, j = int(self.first[row]), int(self.second[row])
        return PairChoice(socks=(self.socks[i], self.socks[j]), xi=float(self.xi[row]), eta=float(self.eta[row]))

    def degrees(self, acceptable: NDArray[np.bool_]) -> NDArray[np.int64]:
        """Number of acceptable partners per sock."""
        n = len(self.socks)
        return np.bincount(self.first[acceptable], minlength=n) + np.bincount(self.second[acceptable], minlength=n)

    def involving(self, sock_index: int) -> NDArray[np.bool_]:
        return (self.first == sock_index) | (self.second == sock_index)
