from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sockopt.app.settings import CatalogueConfig
from sockopt.errors import InvalidInputError

if TYPE_CHECKING:
    from numpy.typing import NDArray

FeatureVector = tuple[int, ...]
CatalogueSpec = CatalogueConfig


def validate_features(values: Sequence[int], feature_sizes: Sequence[int]) -> FeatureVector:
    """Return ``values`` as a FeatureVector after checking length and per-feature bounds."""
    if len(values) != len(feature_sizes):
        msg = f"feature vector has {len(values)} components, feature space has {len(feature_sizes)}"
        raise InvalidInputError(msg)
    out: list[int] = []
    for r, (value, size) in enumerate(zip(values, feature_sizes, strict=True)):
        v = int(value)
        if not 0 <= v < size:
            msg = f"feature f{r + 1}={v} outside [0, {size - 1}]"
            raise InvalidInputError(msg)
        out.append(v)
    return tuple(out)


class SockDesign(BaseModel):
    """A purchasable sock type."""

    model_config = ConfigDict(frozen=True)

    design_id: str
    features: FeatureVector
    price: int = Field(ge=0)
    eco: float = Field(ge=0.0)
    theta: int | None = Field(default=None, ge=1, description="Wear limit override for instances of this design.")
    d: float | None = Field(default=None, ge=0.0, le=1.0, description="Disappearance override.")


@dataclass(frozen=True)
class Catalogue:
    """Immutable design list plus column arrays for vectorised lookups."""

    designs: tuple[SockDesign, ...]
    feature_sizes: tuple[int, ...]
    features: NDArray[np.int64] = field(init=False, repr=False, compare=False)
    prices: NDArray[np.int64] = field(init=False, repr=False, compare=False)
    eco: NDArray[np.float64] = field(init=False, repr=False, compare=False)
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        k = len(self.feature_sizes)
        feats = np.array([d.features for d in self.designs], dtype=np.int64).reshape(len(self.designs), k)
        prices = np.array([d.price for d in self.designs], dtype=np.int64)
        eco = np.array([d.eco for d in self.designs], dtype=np.float64)
        for arr in (feats, prices, eco):
            arr.flags.writeable = False
        index: dict[str, int] = {}
        for i, design in enumerate(self.designs):
            if design.design_id in index:
                msg = f"duplicate design_id '{design.design_id}'"
                raise InvalidInputError(msg)
            index[design.design_id] = i
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "eco", eco)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_designs(cls, designs: Sequence[SockDesign], feature_sizes: Sequence[int]) -> Catalogue:
        sizes = tuple(int(m) for m in feature_sizes)
        for design in designs:
            validate_features(design.features, sizes)
        return cls(designs=tuple(designs), feature_sizes=sizes)

    def __len__(self) -> int:
        return len(self.designs)

    def __iter__(self) -> Iterator[SockDesign]:
        return iter(self.designs)

    def __getitem__(self, i: int) -> SockDesign:
        return self.designs[i]

    def index_of(self, design_id: str) -> int:
        return self._index[design_id]

    @property
    def k(self) -> int:
        return len(self.feature_sizes)
