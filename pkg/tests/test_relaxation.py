import math
import warnings

import numpy as np
import pytest

from alphalift.lift import log_lift_array
from alphalift.probability import random_joint, validate_joint
from alphalift.relaxation import (
    RelaxationConfig,
    abs_loglift_high_risk,
    combined_high_risk,
    delta_refine,
    max_abs_log_lift,
    realized_delta,
    release_cost,
)
from alphalift.watchdog import apply_mechanism, partition_from_set, x_invariant_mechanism


def brute_realized_delta(joint, final, eps_bar):
    """Exceedance mass computed on the sanitized joint itself."""
    if not final:
        out = joint
    else:
        out = apply_mechanism(joint, x_invariant_mechanism(partition_from_set(joint, 2, final), [1.0] + [0.0] * (len(final) - 1)))
    ll = np.abs(log_lift_array(out.pmf))
    return float(out.pmf[ll > eps_bar].sum())


def test_abs_set_toy(toy):
    # column d: i(S = 1, d) = ln(0.05 / 0.11), i(S = 2, d) = ln(0.2 / 0.11)
    assert 3 in abs_loglift_high_risk(toy, 0.55)
    assert max_abs_log_lift(toy)[3] == pytest.approx(-math.log(0.05 / 0.11), abs=1e-12)
    assert 3 not in abs_loglift_high_risk(toy, 0.8)


def test_zero_cells_always_flagged():
    j = validate_joint([[0.3, 0.0, 0.2], [0.1, 0.2, 0.2]])
    assert max_abs_log_lift(j)[1] == math.inf
    assert 1 in abs_loglift_high_risk(j, 100.0)


def test_combined_is_subset():
    cfg = RelaxationConfig(eps_bar=1.0, alpha=10, epsilon=0.45, delta=0.01)
    for seed in range(20):
        j = random_joint(15, 20, seed)
        assert set(combined_high_risk(j, cfg)) <= set(abs_loglift_high_risk(j, 1.0))


def test_combined_warns_on_large_epsilon(toy):
    cfg = RelaxationConfig(eps_bar=0.5, alpha=2, epsilon=0.6, delta=0.01)
    with pytest.warns(UserWarning):
        combined_high_risk(toy, cfg)


@pytest.mark.parametrize("kwargs", [
    dict(eps_bar=0.0, alpha=2, epsilon=0.1, delta=0.1),
    dict(eps_bar=1.0, alpha=2, epsilon=0.1, delta=1.5),
    dict(eps_bar=1.0, alpha=2, epsilon=0.1, delta=0.1, eps_max=0.5),
    dict(eps_bar=1.0, alpha=2, epsilon=0.1, delta=0.1, removal_order="random"),
    dict(eps_bar=1.0, alpha=1.0, epsilon=0.1, delta=0.1),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RelaxationConfig(**kwargs)


def test_realized_delta_matches_sanitized_joint():
    for seed in range(30):
        j = random_joint(6, 9, seed)
        hr = list(abs_loglift_high_risk(j, 0.5))
        for final in (hr, hr[: len(hr) // 2], []):
            if len(final) == j.num_x:
                continue
            assert realized_delta(j, final, 0.5) == pytest.approx(brute_realized_delta(j, final, 0.5), abs=1e-12)


def test_realized_delta_full_merge_is_zero(toy):
    assert realized_delta(toy, range(4), 0.1) == 0.0
    with pytest.raises(ValueError):
        realized_delta(toy, [], 0.0)


@pytest.mark.parametrize("order", ["min_mass", "max_abs_loglift"])
def test_refinement_respects_budgets(order):
    for seed in range(25):
        j = random_joint(15, 20, seed)
        start = abs_loglift_high_risk(j, 1.0)
        removed = []
        final = delta_refine(j, start, 1.0, 0.01, 4.0, order=order, removed=removed)
        assert set(final) <= set(start)
        assert sorted(final + tuple(removed)) == sorted(start)
        if removed:
            assert realized_delta(j, final, 1.0) <= 0.01 + 1e-12
        # nothing left could still be released
        for x in final:
            mass, worst = release_cost(j, final, x, 1.0)
            assert mass > 0.01 or worst > 4.0


def test_refinement_delta_zero_keeps_exceeding_symbols():
    j = random_joint(10, 12, 3)
    start = abs_loglift_high_risk(j, 0.5)
    final = delta_refine(j, start, 0.5, 0.0)
    for x in final:
        assert release_cost(j, final, x, 0.5)[0] > 0


def test_refinement_delta_one_releases_under_infinite_cap():
    j = random_joint(5, 6, 1)
    start = abs_loglift_high_risk(j, 0.2)
    assert delta_refine(j, start, 0.2, 1.0) == ()


def test_bad_order(toy):
    with pytest.raises(ValueError):
        delta_refine(toy, [0], 0.5, 0.1, order="nope")
