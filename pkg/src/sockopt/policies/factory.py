from __future__ import annotations

from collections.abc import Callable

from pydantic import ValidationError

from sockopt.app.settings import PolicyConfig
from sockopt.errors import InvalidInputError
from sockopt.policies.base import PairingPolicy
from sockopt.policies.exposure_aware import ExposureAwarePolicy
from sockopt.policies.greedy import GreedyPolicy
from sockopt.policies.orphan_rescue import OrphanRescuePolicy
from sockopt.policies.purist import PuristPolicy
from sockopt.policies.threshold_mix import ThresholdMixPolicy

PolicySpec = PolicyConfig
PolicyFactory = Callable[[PolicySpec], PairingPolicy]


def _purist(spec: PolicySpec) -> PairingPolicy:
    return PuristPolicy(spec.tau_eta if spec.tau_eta is not None else 0.0)


def _threshold_mix(spec: PolicySpec) -> PairingPolicy:
    assert spec.tau_xi is not None
    return ThresholdMixPolicy(spec.tau_xi)


def _orphan_rescue(spec: PolicySpec) -> PairingPolicy:
    assert spec.tau_xi is not None
    return OrphanRescuePolicy(spec.tau_xi)


_POLICY_FACTORIES: dict[str, PolicyFactory] = {
    "purist": _purist,
    "greedy": lambda spec: GreedyPolicy(),
    "threshold_mix": _threshold_mix,
    "orphan_rescue": _orphan_rescue,
    "exposure_aware": lambda spec: ExposureAwarePolicy(),
}


def register_policy(name: str, factory: PolicyFactory) -> None:
    """Register or replace the factory used for a policy kind."""
    key = name.strip().lower()
    if not key:
        msg = "Policy name must be non-empty"
        raise ValueError(msg)
    _POLICY_FACTORIES[key] = factory


def build_policy(spec: PolicySpec | str) -> PairingPolicy:
    if isinstance(spec, str):
        try:
            spec = PolicySpec.model_validate({"kind": spec})
        except ValidationError as exc:
            msg = f"Unknown policy '{spec}'. Known: {', '.join(sorted(_POLICY_FACTORIES))}"
            raise InvalidInputError(msg) from exc
    factory = _POLICY_FACTORIES.get(spec.kind)
    if factory is None:
        msg = f"Unknown policy '{spec.kind}'. Known: {', '.join(sorted(_POLICY_FACTORIES))}"
        raise InvalidInputError(msg)
    return factory(spec)
