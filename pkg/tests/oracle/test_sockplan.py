from fractions import Fraction

import pytest

from sockopt.errors import GuardExceededError, InvalidInputError
from sockopt.oracle import (
    SockPlanInstance,
    brute_force_sockplan,
    evaluate_policy_on_instance,
    maximal_purchases,
    sock_classes,
    sockplan_from_catalogue,
)
from sockopt.policies import GreedyPolicy

# two expensive socks that match perfectly, two cheap ones that half match
TWO_PAIRS = [
    [0, 1, 0, 0],
    [1, 0, 0, 0],
    [0, 0, 0, "1/2"],
    [0, 0, "1/2", 0],
]


def _pairs(budget, T=1):
    return SockPlanInstance.build([5, 5, 1, 1], TWO_PAIRS, theta=1, T=T, kappa=10, budget=budget)


class TestInstance:
    def test_asymmetric_table(self):
        with pytest.raises(InvalidInputError, match="symmetric"):
            SockPlanInstance.build([1, 1], [[0, 1], [0, 0]], theta=1, T=1, kappa=2, budget=2)

    def test_random_washes_are_rejected(self):
        with pytest.raises(InvalidInputError, match="deterministic"):
            SockPlanInstance(
                prices=(Fraction(1), Fraction(1)),
                xi=((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))),
                theta=(1, 1),
                T=1,
                kappa=2,
                budget=Fraction(2),
                d=(Fraction(0), Fraction(1, 10)),
            )

    def test_default_labels(self):
        assert _pairs(10).labels == ("s0", "s1", "s2", "s3")


class TestClasses:
    def test_interchangeable_socks_share_a_class(self):
        classes = sock_classes(_pairs(10))
        assert [c.members for c in classes] == [(0, 1), (2, 3)]
        assert [c.price for c in classes] == [5, 1]

    def test_maximal_purchases(self):
        classes = sock_classes(_pairs(10))
        assert set(maximal_purchases(classes, Fraction(10))) == {(2, 0), (1, 2)}
        assert list(maximal_purchases(classes, Fraction(4))) == [(0, 2)]

    def test_required_socks_above_budget(self):
        inst = SockPlanInstance.build([3, 3], [[0, 1], [1, 0]], theta=1, T=1, kappa=3, budget=5, required=[0, 1])
        with pytest.raises(InvalidInputError, match="required"):
            brute_force_sockplan(inst)


class TestBruteForce:
    @pytest.mark.parametrize(
        "budget,T,value,purchase",
        [
            (4, 1, Fraction(1, 2), (2, 3)),
            (10, 1, Fraction(1), (0, 1)),
            (12, 2, Fraction(3, 2), (0, 1, 2, 3)),
        ],
    )
    def test_budget_decides_the_purchase(self, budget, T, value, purchase):
        solution = brute_force_sockplan(_pairs(budget, T))
        assert solution.value == value
        assert solution.purchase == purchase
        assert solution.spend <= budget

    def test_washed_socks_are_worn_again(self):
        inst = SockPlanInstance.build([1, 1], [[0, "1/2"], ["1/2", 0]], theta=2, T=3, kappa=2, budget=10)
        solution = brute_force_sockplan(inst)
        assert solution.value == 1
        assert solution.schedule == ((0, 1), (0, 1), None)

    def test_worthless_pairs_leave_days_idle(self):
        inst = SockPlanInstance.build([1, 1], [[0, 0], [0, 0]], theta=1, T=2, kappa=5, budget=2)
        solution = brute_force_sockplan(inst)
        assert solution.value == 0
        assert solution.schedule == (None, None)

    def test_zero_horizon(self):
        assert brute_force_sockplan(_pairs(12, T=0)).value == 0

    def test_schedule_wears_only_purchased_socks(self):
        solution = brute_force_sockplan(_pairs(12, T=2))
        worn = [s for day in solution.schedule if day is not None for s in day]
        assert set(worn) <= set(solution.purchase)
        assert len(worn) == len(set(worn))

    @pytest.mark.parametrize(
        "inst",
        [
            SockPlanInstance.build([1, 1], [[0, 1], [1, 0]], theta=1, T=7, kappa=2, budget=2),
            SockPlanInstance.build([1] * 33, [[0] * 33 for _ in range(33)], theta=1, T=1, kappa=2, budget=1),
            SockPlanInstance.build(list(range(13)), [[0] * 13 for _ in range(13)], theta=1, T=1, kappa=2, budget=1),
        ],
        ids=["horizon", "socks", "classes"],
    )
    def test_guards(self, inst):
        with pytest.raises(GuardExceededError):
            brute_force_sockplan(inst)


class TestCatalogueInstances:
    def test_compatibility_is_the_matching_fraction(self, twin_designs):
        inst = sockplan_from_catalogue(twin_designs, T=2, kappa=10, budget=100)
        assert inst.n == 6
        assert inst.labels[:2] == ("a#0", "a#1")
        assert inst.xi[0][1] == 1
        assert inst.xi[0][2] == Fraction(2, 3)
        assert inst.xi[0][4] == 0
        assert inst.prices[2] == 3

    def test_no_designs(self):
        with pytest.raises(InvalidInputError):
            sockplan_from_catalogue([], T=1, kappa=2, budget=1)

    def test_greedy_reaches_the_optimum_on_twin_pairs(self, twin_designs):
        inst = sockplan_from_catalogue(twin_designs, T=2, kappa=10, budget=100)
        optimum = brute_force_sockplan(inst)
        assert optimum.value == 2
        assert evaluate_policy_on_instance(inst, GreedyPolicy(), purchase=range(6)) == 2

    def test_policy_never_beats_the_oracle(self, twin_designs):
        inst = sockplan_from_catalogue(twin_designs, T=3, kappa=3, budget=8, theta=2)
        optimum = brute_force_sockplan(inst)
        assert evaluate_policy_on_instance(inst, GreedyPolicy()) <= optimum.value

    def test_policies_need_designs(self):
        with pytest.raises(InvalidInputError):
            evaluate_policy_on_instance(_pairs(10), GreedyPolicy())
