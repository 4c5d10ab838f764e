import pytest
from pydantic import ValidationError

from sockopt.app.settings import PolicyConfig
from sockopt.errors import InvalidInputError
from sockopt.policies import (
    GreedyPolicy,
    OrphanRescuePolicy,
    PuristPolicy,
    ThresholdMixPolicy,
    build_policy,
    register_policy,
)


class TestPolicyConfig:
    @pytest.mark.parametrize(
        "fields,label",
        [
            ({"kind": "greedy"}, "greedy"),
            ({"kind": "purist"}, "purist[tau_eta=0]"),
            ({"kind": "threshold_mix"}, "threshold_mix[tau_xi=0.7]"),
            ({"kind": "orphan_rescue", "tau_xi": 0.85}, "orphan_rescue[tau_xi=0.85]"),
            ({"kind": " Exposure_Aware "}, "exposure_aware"),
        ],
    )
    def test_labels(self, fields, label):
        assert PolicyConfig(**fields).label == label

    @pytest.mark.parametrize(
        "fields",
        [
            {"kind": "greedy", "tau_xi": 0.5},
            {"kind": "purist", "tau_xi": 0.5},
            {"kind": "threshold_mix", "tau_eta": 0.0},
            {"kind": "purist", "tau_eta": 1.5},
            {"kind": "lookahead"},
        ],
    )
    def test_invalid(self, fields):
        with pytest.raises(ValidationError):
            PolicyConfig(**fields)


class TestBuildPolicy:
    def test_from_config(self):
        policy = build_policy(PolicyConfig(kind="threshold_mix", tau_xi=0.8))
        assert isinstance(policy, ThresholdMixPolicy)
        assert policy.tau_xi == 0.8

    @pytest.mark.parametrize(
        "name,cls", [("greedy", GreedyPolicy), ("purist", PuristPolicy), ("orphan_rescue", OrphanRescuePolicy)]
    )
    def test_from_name(self, name, cls):
        assert isinstance(build_policy(name), cls)

    def test_unknown_name(self):
        with pytest.raises(InvalidInputError, match="Unknown policy"):
            build_policy("lookahead")

    def test_register_replaces_factory(self):
        class Loud(GreedyPolicy):
            pass

        register_policy("greedy", lambda spec: Loud())
        try:
            assert isinstance(build_policy("greedy"), Loud)
        finally:
            register_policy("greedy", lambda spec: GreedyPolicy())

    def test_register_rejects_blank_name(self):
        with pytest.raises(ValueError):
            register_policy("  ", lambda spec: GreedyPolicy())
