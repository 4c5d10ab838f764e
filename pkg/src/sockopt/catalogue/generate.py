from __future__ import annotations

import logging

import numpy as np

from sockopt.catalogue.models import Catalogue, CatalogueSpec, SockDesign
from sockopt.errors import InvalidInputError

logger = logging.getLogger(__name__)

# np.unravel_index works on int64 flat indices
_MAX_FLAT_SPACE = 2**62


def _design_id(i: int, n: int) -> str:
    width = max(4, len(str(n)))
    return f"d{i + 1:0{width}d}"


def _sample_vectors(spec: CatalogueSpec, rng: np.random.Generator) -> np.ndarray:
    sizes = spec.feature_sizes
    space = spec.space_size
    n = spec.n_designs
    distinct = spec.distinct == "always" or (spec.distinct == "auto" and n <= space)
    if spec.distinct == "always" and n > space:
        msg = f"cannot draw {n} distinct feature vectors from a space of {space}"
        raise InvalidInputError(msg)

    if space <= _MAX_FLAT_SPACE:
        flat = rng.choice(space, size=n, replace=not distinct)
        return np.stack(np.unravel_index(flat, sizes), axis=1).astype(np.int64)

    # huge spaces: per-feature draws, collisions rejected until n unique vectors exist
    rows: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    while len(rows) < n:
        vec = tuple(int(rng.integers(m)) for m in sizes)
        if distinct and vec in seen:
            continue
        seen.add(vec)
        rows.append(vec)
    return np.array(rows, dtype=np.int64)


def generate_catalogue(spec: CatalogueSpec, rng: np.random.Generator | None = None) -> list[SockDesign]:
    """Sample a synthetic catalogue: uniform feature vectors, uniform integer prices, eco = alpha * price.

    Either ``spec.seed`` or an explicit generator must be supplied.
    """
    if rng is None:
        if spec.seed is None:
            msg = "generate_catalogue needs spec.seed or an explicit rng"
            raise InvalidInputError(msg)
        rng = np.random.default_rng(spec.seed)

    vectors = _sample_vectors(spec, rng)
    lo, hi = spec.price_range
    prices = rng.integers(lo, hi + 1, size=spec.n_designs)
    designs = [
        SockDesign(
            design_id=_design_id(i, spec.n_designs),
            features=tuple(int(v) for v in vectors[i]),
            price=int(prices[i]),
            eco=spec.alpha * int(prices[i]),
        )
        for i in range(spec.n_designs)
    ]
    logger.debug("Generated %d designs over feature sizes %s", len(designs), spec.feature_sizes)
    return designs


def build_catalogue(spec: CatalogueSpec, rng: np.random.Generator | None = None) -> Catalogue:
    """Load ``spec.path`` when set, otherwise generate; returns the array-backed catalogue."""
    if spec.path is not None:
        from sockopt.catalogue.io import load_catalogue

        designs = load_catalogue(spec.path, feature_sizes=spec.feature_sizes, alpha=spec.alpha)
    else:
        designs = generate_catalogue(spec, rng)
    return Catalogue.from_designs(designs, spec.feature_sizes)
