"""Bundle study design and simulated per-bundle cost estimates."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.stats import entropy

from sockopt.app.settings import AgentConfig, EstimationConfig, PolicyConfig, SimulationConfig
from sockopt.catalogue.models import SockDesign
from sockopt.environment.simulator import simulate
from sockopt.errors import InvalidInputError
from sockopt.experiments.executor import ExecutorSpec, resolve_executor
from sockopt.policies.greedy import GreedyPolicy

if TYPE_CHECKING:
    from sockopt.catalogue.models import Catalogue
    from sockopt.environment.models import SimConfig

logger = logging.getLogger(__name__)

Bundle = tuple[SockDesign, ...]


@dataclass(frozen=True, slots=True)
class BundleCosts:
    c_soc: float
    c_rep: float


def bundle_diversity(bundle: Sequence[SockDesign]) -> float:
    """Shannon entropy (nats) of the design counts in a bundle."""
    if not bundle:
        return 0.0
    _, counts = np.unique([d.design_id for d in bundle], return_counts=True)
    return float(entropy(counts)) if counts.size > 1 else 0.0


def reference_regime(config: EstimationConfig, *, seed: int = 0, chi: float = 1.0) -> SimulationConfig:
    """Short deterministic-seed regime in which bundles are worn for cost estimation."""
    return SimulationConfig(
        T=config.horizon_ref,
        kappa=config.kappa_ref,
        theta=config.theta_ref,
        d=config.d_ref,
        agent=AgentConfig(b=0.0, chi=chi, delta=0.0, rho=config.rho_ref, gamma=config.gamma),
        policy=PolicyConfig(kind="greedy"),
        replenishment=False,
        seed=seed,
    )


def simulate_bundle_costs(bundle: Sequence[SockDesign], chi_hat: float, regime: SimConfig, n_sims: int = 40) -> BundleCosts:
    """Mean social cost and mean stranded capacity (in wears) of wearing only ``bundle``.

    Replication ``r`` uses the regime's seeded streams, so every bundle sees the
    same exposure and wash draws.
    """
    if not bundle:
        msg = "bundle must hold at least one design"
        raise InvalidInputError(msg)
    if n_sims < 1:
        msg = f"n_sims must be >= 1, got {n_sims}"
        raise InvalidInputError(msg)
    config = regime.model_copy(update={"agent": regime.agent.model_copy(update={"chi": chi_hat})})
    policy = GreedyPolicy()
    social = np.empty(n_sims)
    stranded = np.empty(n_sims)
    for r in range(n_sims):
        metrics = simulate(config, replication=r, policy=policy, initial_designs=bundle).metrics
        social[r] = metrics.social
        stranded[r] = metrics.stranded
    return BundleCosts(c_soc=float(social.mean()), c_rep=float(stranded.mean()))


@dataclass(frozen=True)
class BundleDesign:
    """A pool of bundles and the choice sets built from it (indices into ``bundles``)."""

    bundles: tuple[Bundle, ...]
    levels: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]

    @property
    def diversity(self) -> np.ndarray:
        return np.array([bundle_diversity(b) for b in self.bundles], dtype=np.float64)


def _fill(picks: Sequence[SockDesign], size: int) -> Bundle:
    # spread `size` slots as evenly as possible over the picked designs
    counts = [len(part) for part in np.array_split(np.arange(size), len(picks))]
    return tuple(design for design, c in zip(picks, counts, strict=True) for _ in range(c))


def build_bundle_design(
    catalogue: Catalogue,
    size: int,
    n_sets: int,
    bundles_per_set: int,
    rng: np.random.Generator,
    *,
    levels: Sequence[int] = (1, 2, 3, 6),
    pool_size: int = 32,
    bundles_per_level: int = 8,
) -> BundleDesign:
    """Fixed-size bundles mixing few or many designs, and choice sets drawn across mixing levels."""
    if bundles_per_set < 2:
        msg = f"a choice set needs at least two bundles, got {bundles_per_set}"
        raise InvalidInputError(msg)
    pool_n = min(pool_size, len(catalogue))
    if max(levels) > pool_n or max(levels) > size:
        msg = f"cannot mix {max(levels)} designs in bundles of {size} from a pool of {pool_n}"
        raise InvalidInputError(msg)
    pool = rng.choice(len(catalogue), size=pool_n, replace=False)

    bundles: list[Bundle] = []
    bundle_levels: list[int] = []
    for level in levels:
        for _ in range(bundles_per_level):
            picks = rng.choice(pool, size=level, replace=False)
            bundles.append(_fill([catalogue[int(i)] for i in picks], size))
            bundle_levels.append(level)

    sets = []
    replace = bundles_per_set > len(levels)
    for _ in range(n_sets):
        level_idx = rng.choice(len(levels), size=bundles_per_set, replace=replace)
        offsets = rng.integers(bundles_per_level, size=bundles_per_set)
        sets.append(tuple(int(li * bundles_per_level + off) for li, off in zip(level_idx, offsets, strict=True)))
    return BundleDesign(bundles=tuple(bundles), levels=tuple(bundle_levels), sets=tuple(sets))


@dataclass(frozen=True)
class BundleCostTable:
    """Per-bundle social cost at unit sensitivity and replacement term; social cost scales linearly in chi."""

    unit_soc: np.ndarray
    c_rep: np.ndarray

    def c_soc(self, chi: float) -> np.ndarray:
        return chi * self.unit_soc


def _unit_costs(task: tuple[Bundle, SimulationConfig, int]) -> BundleCosts:
    bundle, regime, n_sims = task
    return simulate_bundle_costs(bundle, 1.0, regime, n_sims)


def bundle_cost_table(
    design: BundleDesign,
    regime: SimulationConfig,
    n_sims: int,
    *,
    executor: ExecutorSpec = None,
    jobs: int = 1,
) -> BundleCostTable:
    runner = resolve_executor(executor, jobs=jobs)
    logger.info("Simulating costs of %d bundles x %d runs", len(design.bundles), n_sims)
    costs = runner.map(_unit_costs, [(b, regime, n_sims) for b in design.bundles])
    return BundleCostTable(
        unit_soc=np.array([c.c_soc for c in costs], dtype=np.float64),
        c_rep=np.array([c.c_rep for c in costs], dtype=np.float64),
    )
