from sockopt.policies.base import PairingPolicy
from sockopt.policies.exposure_aware import ExposureAwarePolicy, select_exposure_aware
from sockopt.policies.factory import PolicySpec, build_policy, register_policy
from sockopt.policies.greedy import GreedyPolicy, select_greedy
from sockopt.policies.orphan_rescue import OrphanRescuePolicy, select_orphan_rescue
from sockopt.policies.pairs import NO_PAIR, PairChoice, PairTable
from sockopt.policies.purist import PuristPolicy, select_purist
from sockopt.policies.threshold_mix import ThresholdMixPolicy, select_threshold_mix

__all__ = [
    "NO_PAIR",
    "ExposureAwarePolicy",
    "GreedyPolicy",
    "OrphanRescuePolicy",
    "PairChoice",
    "PairTable",
    "PairingPolicy",
    "PolicySpec",
    "PuristPolicy",
    "ThresholdMixPolicy",
    "build_policy",
    "register_policy",
    "select_exposure_aware",
    "select_greedy",
    "select_orphan_rescue",
    "select_purist",
    "select_threshold_mix",
]
