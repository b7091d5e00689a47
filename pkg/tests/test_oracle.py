import numpy as np
import pytest

from alphalift.lift import INF
from alphalift.oracle import (
    ViolationFound,
    output_lifts,
    sample_watchdog_mechanism,
    strict_tradeoff_check,
    verify_strict_tradeoff,
    verify_x_invariant_optimality,
)
from alphalift.probability import random_joint
from alphalift.watchdog import (
    EmptyHighRisk,
    output_alpha_lift,
    partition,
    partition_from_set,
    watchdog_mechanism,
)


@pytest.mark.parametrize("a", [1.5, 2, 10, INF])
def test_oracle_passes_on_toy(toy, a):
    part = partition_from_set(toy, a, [2, 3])
    rep = verify_x_invariant_optimality(toy, part, 2000, seed=1)
    assert rep.passed
    assert rep.violations == 0
    assert rep.invariant_max_gap <= 1e-10
    assert rep.invariant_expected_gap <= 1e-10
    assert rep.best_sampled_max >= rep.merged_lift - 1e-9
    assert rep.num_fixed == 1 + 2**2


def test_oracle_lifts_agree_with_mechanism_route(toy):
    part = partition(toy, 2, 0.17)
    r = np.array([[0.2, 0.8], [0.6, 0.4]])
    via_oracle = output_lifts(toy, part, r)[0]
    via_mech = output_alpha_lift(toy, watchdog_mechanism(part, r), 2)[2:]
    np.testing.assert_allclose(via_oracle, via_mech, rtol=1e-12)


def test_oracle_is_seeded(toy):
    part = partition_from_set(toy, 2, [1, 2, 3])
    a = verify_x_invariant_optimality(toy, part, 1500, seed=5)
    b = verify_x_invariant_optimality(toy, part, 1500, seed=5)
    assert a.to_dict() == b.to_dict()
    m1 = sample_watchdog_mechanism(part, 9)
    m2 = sample_watchdog_mechanism(part, 9)
    assert np.array_equal(m1.transition, m2.transition)


def test_oracle_detects_a_planted_violation(toy, monkeypatch):
    part = partition_from_set(toy, 2, [2, 3])
    # pretend the bound is larger than it is; sampled mechanisms now "beat" it
    fake = type(part)(**{**part.__dict__, "log_merged_lift": part.log_merged_lift + 0.5})
    with pytest.raises(ViolationFound) as err:
        verify_x_invariant_optimality(toy, fake, 100, seed=0)
    assert err.value.report.violations > 0
    assert err.value.mechanism is not None
    rep = verify_x_invariant_optimality(toy, fake, 100, seed=0, raise_on_violation=False)
    assert not rep.passed


def test_empty_set_rejected(toy):
    with pytest.raises(EmptyHighRisk):
        verify_x_invariant_optimality(toy, partition(toy, 2, 10.0), 10, seed=0)


def test_strict_tradeoff_check_logic():
    premise, conclusion = strict_tradeoff_check(np.array([[0.9, 0.95, 1.3], [0.9, 1.2, 1.3], [np.nan, 0.5, 2.0]]), 1.0)
    assert premise.tolist() == [True, False, True]
    assert conclusion.tolist() == [True, False, True]
    premise, _ = strict_tradeoff_check(np.array([[np.nan, np.nan, 2.0]]), 1.0)
    assert not premise[0]


def test_strict_tradeoff_random():
    for seed in range(5):
        j = random_joint(4, 5, seed)
        part = partition_from_set(j, 2, [0, 1, 2])
        assert verify_strict_tradeoff(j, part, 2000, seed) > 0


def test_strict_tradeoff_needs_two(toy):
    with pytest.raises(ValueError):
        verify_strict_tradeoff(toy, partition_from_set(toy, 2, [3]), 10, 0)
