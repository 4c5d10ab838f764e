from __future__ import annotations

import logging
import os
import pathlib
from collections.abc import Mapping
from typing import Annotated, Any, Literal

import numpy as np
import yaml
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from sockopt.errors import InvalidInputError
from sockopt.utils.validation import Normalize

logger = logging.getLogger(__name__)

PolicyKind = Literal["purist", "greedy", "threshold_mix", "orphan_rescue", "exposure_aware"]
ReplenishmentRule = Literal["cheapest_match", "exposure_aware", "matchable"]
RoundingRule = Literal["half_even", "half_up", "floor"]
DiversityFunctional = Literal["shannon", "dispersion"]
DiversityTime = Literal["start", "end"]

POLICY_THRESHOLDS: dict[str, str | None] = {
    "purist": "tau_eta",
    "greedy": None,
    "threshold_mix": "tau_xi",
    "orphan_rescue": "tau_xi",
    "exposure_aware": None,
}
DEFAULT_TAU_ETA = 0.0
DEFAULT_TAU_XI = 0.7


def _parse_int_tuple(v: Any) -> Any:
    if isinstance(v, str):
        parts = [p for p in v.replace(" ", "").split(",") if p]
        return tuple(int(p) for p in parts)
    return v


def _parse_float_tuple(v: Any) -> Any:
    if isinstance(v, str):
        parts = [p for p in v.replace(" ", "").split(",") if p]
        return tuple(float(p) for p in parts)
    return v


def _parse_diversity_times(v: Any) -> Any:
    aliases = {"0": "start", "start": "start", "t": "end", "end": "end"}
    if isinstance(v, str | int):
        v = [v]
    if isinstance(v, list | tuple):
        out = []
        for item in v:
            key = str(item).strip().lower()
            out.append(aliases.get(key, key))
        return tuple(out)
    return v


IntTuple = Annotated[tuple[int, ...], BeforeValidator(_parse_int_tuple)]
FloatTuple = Annotated[tuple[float, ...], BeforeValidator(_parse_float_tuple)]


class CatalogueConfig(BaseModel):
    """Where the catalogue comes from: a CSV file, or the synthetic generator."""

    n_designs: int = Field(default=1248, ge=1, description="Number of designs to generate.")
    feature_sizes: IntTuple = Field(
        default=(32, 13, 3), description="Cardinality m_r of every appearance feature (colour, pattern, length)."
    )
    price_min: int = Field(default=5, ge=0, description="Lowest generated integer price.")
    price_max: int = Field(default=15, ge=0, description="Highest generated integer price (inclusive).")
    alpha: float = Field(default=1.0, ge=0.0, description="Eco proxy per currency unit, eco = alpha * price.")
    distinct: Annotated[Literal["auto", "always", "never"], Normalize] = Field(
        default="auto",
        description="Sample feature vectors without replacement: 'auto' does so while n_designs fits the space.",
    )
    seed: int | None = Field(default=None, description="Generator seed; None derives it from the master seed.")
    path: str | None = Field(default=None, description="Catalogue CSV; when set the generator is not used.")

    @model_validator(mode="after")
    def _check_ranges(self) -> CatalogueConfig:
        if not self.feature_sizes:
            msg = "feature_sizes must name at least one feature"
            raise ValueError(msg)
        if any(m < 1 for m in self.feature_sizes):
            msg = f"feature cardinalities must be >= 1, got {self.feature_sizes}"
            raise ValueError(msg)
        if self.price_min > self.price_max:
            msg = f"price_min {self.price_min} exceeds price_max {self.price_max}"
            raise ValueError(msg)
        return self

    @property
    def price_range(self) -> tuple[int, int]:
        return (self.price_min, self.price_max)

    @property
    def space_size(self) -> int:
        return int(np.prod(self.feature_sizes, dtype=object))


class AgentConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    b: float = Field(default=200.0, ge=0.0, description="Total spend limit in currency units.")
    chi: float = Field(default=1.25, ge=0.0, description="Mismatch sensitivity.")
    delta: float = Field(
        default=0.5, ge=0.0, description="Diversity preference; values above 1 act as 1 for purchase concentration."
    )
    rho: float = Field(default=0.5, ge=0.0, le=1.0, description="Daily probability that the worn pair is seen.")
    gamma: float = Field(default=1.02, ge=1.0, description="Penalty exponent, g(eta) = eta ** gamma.")
    lam: float = Field(default=0.0, ge=0.0, alias="lambda", description="Eco-to-utility weight.")


class PolicyConfig(BaseModel):
    kind: Annotated[PolicyKind, Normalize] = "greedy"
    tau_eta: float | None = Field(default=None, ge=0.0, le=1.0, description="Purist mismatch ceiling.")
    tau_xi: float | None = Field(default=None, ge=0.0, le=1.0, description="Compatibility floor for mixing.")

    @model_validator(mode="after")
    def _check_thresholds(self) -> PolicyConfig:
        used = POLICY_THRESHOLDS[self.kind]
        for name in ("tau_eta", "tau_xi"):
            if name != used and getattr(self, name) is not None:
                msg = f"policy '{self.kind}' does not take {name}"
                raise ValueError(msg)
        if used == "tau_eta" and self.tau_eta is None:
            self.tau_eta = DEFAULT_TAU_ETA
        if used == "tau_xi" and self.tau_xi is None:
            self.tau_xi = DEFAULT_TAU_XI
        return self

    @property
    def label(self) -> str:
        used = POLICY_THRESHOLDS[self.kind]
        if used is None:
            return self.kind
        return f"{self.kind}[{used}={getattr(self, used):g}]"


class SimulationConfig(BaseModel):
    T: int = Field(default=365, ge=1, description="Horizon in days.")
    kappa: int = Field(default=14, ge=1, description="Laundry capacity; the buffer is washed once it holds kappa socks.")
    theta: int = Field(default=50, ge=1, description="Default wear limit; a sock retires on the wear that takes tau past it.")
    d: float = Field(default=0.02, ge=0.0, le=1.0, description="Default per-wash disappearance probability.")
    agent: AgentConfig = Field(default_factory=AgentConfig)
    policy: PolicyConfig = Field(default_factory=PolicyConfig)
    replenishment: bool = Field(default=True, description="Buy a pair when the policy finds nothing to wear.")
    replenishment_rule: Annotated[ReplenishmentRule, Normalize] = "cheapest_match"
    wash_when_short: bool = Field(
        default=True,
        description="Wash a partly filled laundry buffer on a day that starts with fewer than two clean socks.",
    )
    rounding: Annotated[RoundingRule, Normalize] = "half_even"
    diversity: Annotated[DiversityFunctional, Normalize] = "shannon"
    diversity_times: Annotated[tuple[DiversityTime, ...], BeforeValidator(_parse_diversity_times)] = ("start",)
    catalogue: CatalogueConfig = Field(default_factory=CatalogueConfig)
    seed: int = Field(default=0, ge=0, description="Master seed for every random stream.")


def _default_grid_policies() -> tuple[PolicyConfig, ...]:
    return (
        PolicyConfig(kind="purist"),
        PolicyConfig(kind="greedy"),
        PolicyConfig(kind="threshold_mix"),
        PolicyConfig(kind="orphan_rescue"),
    )


class GridConfig(BaseModel):
    d_values: FloatTuple = Field(default=(0.0, 0.03, 0.06, 0.09, 0.12, 0.15))
    theta_values: IntTuple = Field(default=(15, 25, 40))
    replications: int = Field(default=60, ge=2)
    policies: tuple[PolicyConfig, ...] = Field(default_factory=_default_grid_policies)
    base: SimulationConfig = Field(default_factory=SimulationConfig)

    @model_validator(mode="after")
    def _check_grid(self) -> GridConfig:
        if not self.d_values or not self.theta_values or not self.policies:
            msg = "grid needs at least one d value, one theta value and one policy"
            raise ValueError(msg)
        if any(not 0.0 <= d <= 1.0 for d in self.d_values):
            msg = f"d values must lie in [0, 1], got {self.d_values}"
            raise ValueError(msg)
        if any(t < 1 for t in self.theta_values):
            msg = f"theta values must be >= 1, got {self.theta_values}"
            raise ValueError(msg)
        return self


class TradeoffConfig(BaseModel):
    tau_xi_values: FloatTuple = Field(default=(1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7))
    families: tuple[Annotated[Literal["threshold_mix", "orphan_rescue"], Normalize], ...] = (
        "threshold_mix",
        "orphan_rescue",
    )
    baseline_tau_eta: float = Field(default=0.0, ge=0.0, le=1.0)
    replications: int = Field(default=60, ge=1)

    @model_validator(mode="after")
    def _check_sweep(self) -> TradeoffConfig:
        if not self.tau_xi_values:
            msg = "tau_xi sweep must not be empty"
            raise ValueError(msg)
        if any(not 0.0 <= t <= 1.0 for t in self.tau_xi_values):
            msg = f"tau_xi values must lie in [0, 1], got {self.tau_xi_values}"
            raise ValueError(msg)
        return self


class ParamDistribution(BaseModel):
    """Population distribution of a respondent parameter.

    ``lognormal`` is parameterised by its mean and median, which is how study summaries
    usually report a right-skewed estimate histogram.
    """

    kind: Annotated[Literal["lognormal", "uniform", "constant"], Normalize] = "lognormal"
    mean: float | None = Field(default=None, gt=0.0)
    median: float | None = Field(default=None, gt=0.0)
    low: float | None = None
    high: float | None = None
    value: float | None = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def _check_params(self) -> ParamDistribution:
        if self.kind == "lognormal":
            if self.mean is None or self.median is None or self.mean < self.median:
                msg = "lognormal needs mean >= median > 0"
                raise ValueError(msg)
        elif self.kind == "uniform":
            if self.low is None or self.high is None or not 0.0 <= self.low <= self.high:
                msg = "uniform needs 0 <= low <= high"
                raise ValueError(msg)
        elif self.value is None:
            msg = "constant needs value"
            raise ValueError(msg)
        return self

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "lognormal":
            assert self.mean is not None and self.median is not None
            mu = float(np.log(self.median))
            sigma = float(np.sqrt(2.0 * np.log(self.mean / self.median)))
            return rng.lognormal(mean=mu, sigma=sigma, size=n)
        if self.kind == "uniform":
            assert self.low is not None and self.high is not None
            return rng.uniform(self.low, self.high, size=n)
        assert self.value is not None
        return np.full(n, self.value, dtype=float)


class EstimationConfig(BaseModel):
    ridge_chi: float = Field(default=1e-3, ge=0.0)
    ridge_delta: float = Field(default=1e-3, ge=0.0)
    upper_bound: float = Field(default=1e4, gt=0.0, description="Largest estimate the bracket search may reach.")
    gamma: float = Field(default=1.02, ge=1.0, description="Penalty exponent used to turn eta into severity.")
    # pairwise-comparison study
    n_trials: int = Field(default=500, ge=1)
    trial_design: Annotated[Literal["contrast", "factorial"], Normalize] = "contrast"
    stimulus_k: int = Field(default=3, ge=1)
    stimulus_levels: int = Field(default=3, ge=2)
    # bundle study
    bundle_size: int = Field(default=6, ge=2)
    diversity_levels: IntTuple = Field(
        default=(1, 2, 3, 6), description="Numbers of distinct designs a bundle may mix (concentration levels)."
    )
    bundles_per_level: int = Field(default=8, ge=1, description="Distinct bundles simulated per diversity level.")
    n_sets: int = Field(default=200, ge=1)
    bundles_per_set: int = Field(default=4, ge=2)
    pool_size: int = Field(default=32, ge=2)
    # reference regime used to simulate bundle costs
    rho_ref: float = Field(default=0.5, ge=0.0, le=1.0)
    d_ref: float = Field(default=0.05, ge=0.0, le=1.0)
    theta_ref: int = Field(default=50, ge=1)
    kappa_ref: int = Field(default=4, ge=1)
    horizon_ref: int = Field(default=3, ge=1)
    n_sims: int = Field(default=40, ge=1)
    # synthetic respondents
    respondents: int = Field(default=100, ge=0)
    chi_dist: ParamDistribution = Field(default_factory=lambda: ParamDistribution(mean=1.120, median=0.968))
    delta_dist: ParamDistribution = Field(default_factory=lambda: ParamDistribution(mean=1.753, median=1.368))
    compliance_intercept: float = -0.5
    compliance_slope: float = 0.4
    compliance_noise: float = Field(default=0.5, ge=0.0)

    @model_validator(mode="after")
    def _check_bundles(self) -> EstimationConfig:
        if not self.diversity_levels or any(not 1 <= t <= self.bundle_size for t in self.diversity_levels):
            msg = f"diversity levels must lie in [1, bundle_size={self.bundle_size}], got {self.diversity_levels}"
            raise ValueError(msg)
        if max(self.diversity_levels) > self.pool_size:
            msg = f"pool of {self.pool_size} designs cannot fill a bundle mixing {max(self.diversity_levels)} designs"
            raise ValueError(msg)
        return self


class OracleConfig(BaseModel):
    max_sock_classes: int = Field(default=12, ge=1, description="Guard on interchangeable sock classes.")
    max_socks: int = Field(default=32, ge=1, description="Guard on raw catalogue size.")
    max_horizon: int = Field(default=6, ge=1)
    max_knapsack_items: int = Field(default=20, ge=0)
    max_coverage_sets: int = Field(default=16, ge=1)
    coverage_variant: Annotated[Literal["enumerate", "simple"], Normalize] = "enumerate"
    random_items: int = Field(default=5, ge=0, description="Items per random knapsack instance.")
    random_trials: int = Field(default=50, ge=1)
    max_value: int = Field(default=9, ge=1, description="Largest random weight/value.")


def _default_jobs() -> int:
    raw = os.environ.get("SOCKOPT_JOBS")
    if raw is None or not raw.strip():
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("Ignoring non-integer SOCKOPT_JOBS=%r", raw)
        return 1


class RunSettings(BaseModel):
    seed: int = Field(ge=0, description="Master seed; every random stream derives from it.")
    jobs: int = Field(default_factory=_default_jobs, ge=1)
    reps: int = Field(default=60, ge=1)
    out_dir: str = Field(default="sockopt-out")
    trace: bool = False


_AGENT_KEYS = {"b": "b", "chi": "chi", "delta": "delta", "rho": "rho", "gamma": "gamma", "lambda": "lambda"}
_TOP_KEYS = {
    "T",
    "kappa",
    "theta",
    "d",
    "replenishment",
    "replenishment_rule",
    "wash_when_short",
    "rounding",
    "diversity",
    "seed",
}
_CATALOGUE_KEYS = {
    "alpha": "alpha",
    "catalogue": "path",
    "n_designs": "n_designs",
    "features": "feature_sizes",
    "price_min": "price_min",
    "price_max": "price_max",
    "catalogue_seed": "seed",
    "distinct": "distinct",
}
RUN_CONFIG_KEYS = frozenset(
    set(_AGENT_KEYS) | _TOP_KEYS | set(_CATALOGUE_KEYS) | {"policy", "tau_eta", "tau_xi", "diversity_times"}
)


def _read_config_file(path: str | pathlib.Path) -> dict[str, Any]:
    p = pathlib.Path(path)
    try:
        raw = yaml.safe_load(p.read_text(encoding="utf-8"))
    except OSError as exc:
        msg = f"cannot read config file {p}: {exc}"
        raise InvalidInputError(msg) from exc
    except UnicodeDecodeError as exc:
        msg = f"config file {p} is not UTF-8 text: {exc.reason}"
        raise InvalidInputError(msg) from exc
    except yaml.YAMLError as exc:
        msg = f"config file {p} is not valid YAML: {exc}"
        raise InvalidInputError(msg) from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        msg = f"config file {p} must hold a flat mapping, got {type(raw).__name__}"
        raise InvalidInputError(msg)
    return {str(k): v for k, v in raw.items()}


def config_from_flat(values: Mapping[str, Any]) -> SimulationConfig:
    """Build a SimulationConfig from the flat key/value layout of run config files."""
    unknown = set(values) - RUN_CONFIG_KEYS
    if unknown:
        msg = f"unknown run config keys: {', '.join(sorted(unknown))}"
        raise InvalidInputError(msg)

    nested: dict[str, Any] = {"agent": {}, "catalogue": {}, "policy": {}}
    for key, value in values.items():
        if key in _AGENT_KEYS:
            nested["agent"][_AGENT_KEYS[key]] = value
        elif key in _CATALOGUE_KEYS:
            nested["catalogue"][_CATALOGUE_KEYS[key]] = value
        elif key == "policy":
            nested["policy"]["kind"] = value
        elif key in ("tau_eta", "tau_xi"):
            nested["policy"][key] = value
        else:
            nested[key] = value

    kind = str(nested["policy"].get("kind", "greedy")).strip().lower().replace("-", "_")
    used = POLICY_THRESHOLDS.get(kind)
    for name in ("tau_eta", "tau_xi"):
        if name in nested["policy"] and name != used:
            logger.debug("Dropping %s: policy '%s' does not use it", name, kind)
            nested["policy"].pop(name)

    try:
        return SimulationConfig.model_validate(nested)
    except ValidationError as exc:
        msg = f"invalid run configuration: {exc}"
        raise InvalidInputError(msg) from exc


def load_run_config(path: str | pathlib.Path | None, overrides: Mapping[str, Any] | None = None) -> SimulationConfig:
    """Merge a flat YAML run config with command-line overrides; overrides win, ``None`` means unset."""
    values: dict[str, Any] = _read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return config_from_flat(values)


def flatten_config(config: SimulationConfig) -> dict[str, Any]:
    """Inverse of :func:`config_from_flat`, used for manifests and example files."""
    flat: dict[str, Any] = {
        "T": config.T,
        "kappa": config.kappa,
        "theta": config.theta,
        "d": config.d,
        "b": config.agent.b,
        "chi": config.agent.chi,
        "delta": config.agent.delta,
        "rho": config.agent.rho,
        "gamma": config.agent.gamma,
        "lambda": config.agent.lam,
        "alpha": config.catalogue.alpha,
        "policy": config.policy.kind,
        "replenishment": config.replenishment,
        "replenishment_rule": config.replenishment_rule,
        "wash_when_short": config.wash_when_short,
        "rounding": config.rounding,
        "diversity": config.diversity,
        "diversity_times": list(config.diversity_times),
        "seed": config.seed,
        "catalogue": config.catalogue.path,
        "n_designs": config.catalogue.n_designs,
        "features": list(config.catalogue.feature_sizes),
        "price_min": config.catalogue.price_min,
        "price_max": config.catalogue.price_max,
    }
    if config.policy.tau_eta is not None:
        flat["tau_eta"] = config.policy.tau_eta
    if config.policy.tau_xi is not None:
        flat["tau_xi"] = config.policy.tau_xi
    return flat
