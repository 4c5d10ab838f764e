"""Normalised Hamming dissimilarity and the compatibility score built on it."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from typing import TYPE_CHECKING

import numpy as np

from sockopt.errors import InvalidInputError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from sockopt.catalogue.models import SockDesign

Category = tuple[int, int]


def mismatch_count(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        msg = f"feature vectors differ in length: {len(a)} vs {len(b)}"
        raise InvalidInputError(msg)
    if not a:
        msg = "feature vectors must have at least one component"
        raise InvalidInputError(msg)
    return sum(1 for x, y in zip(a, b, strict=True) if x != y)


def dissimilarity(a: Sequence[int], b: Sequence[int]) -> float:
    return mismatch_count(a, b) / len(a)


def compatibility(a: Sequence[int], b: Sequence[int]) -> float:
    return 1.0 - dissimilarity(a, b)


def _as_feature_array(features: ArrayLike) -> NDArray[np.int64]:
    arr = np.asarray(features, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] == 0:
        msg = f"expected an (n, k) feature array with k >= 1, got shape {arr.shape}"
        raise InvalidInputError(msg)
    return arr


def mismatch_matrix(features: ArrayLike) -> NDArray[np.int64]:
    arr = _as_feature_array(features)
    return (arr[:, None, :] != arr[None, :, :]).sum(axis=2)


def dissimilarity_matrix(features: ArrayLike) -> NDArray[np.float64]:
    arr = _as_feature_array(features)
    return mismatch_matrix(arr) / arr.shape[1]


def compatibility_matrix(features: ArrayLike) -> NDArray[np.float64]:
    return 1.0 - dissimilarity_matrix(features)


def feature_sets(design: SockDesign) -> frozenset[Category]:
    """Symbolic appearance categories ``{(r, u_r)}`` of a design."""
    return frozenset(enumerate(design.features))


def weighted_coverage(designs: Iterable[SockDesign], weights: Mapping[Category, float]) -> float:
    """Total weight of the appearance categories covered by ``designs``; unlisted categories weigh 0."""
    covered: set[Category] = set()
    for design in designs:
        covered |= feature_sets(design)
    return float(sum(weights.get(c, 0.0) for c in covered))


def stimulus_space(k: int, levels: int = 3) -> NDArray[np.int64]:
    """Full factorial appearance space with ``levels`` values per feature, shape (levels**k, k)."""
    if k < 1 or levels < 1:
        msg = f"stimulus space needs k >= 1 and levels >= 1, got k={k}, levels={levels}"
        raise InvalidInputError(msg)
    grids = np.indices((levels,) * k).reshape(k, -1).T
    return grids.astype(np.int64)
