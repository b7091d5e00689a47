import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphalift.probability import (
    BadDimensions,
    DeadSymbol,
    DimensionMismatch,
    NegativeEntry,
    NotNormalized,
    derive_seed,
    entropy_x,
    joint_from_conditional,
    marginals,
    mutual_information,
    random_joint,
    to_bits,
    validate_joint,
)


def test_validate_accepts_normalized():
    j = validate_joint([[0.3, 0.3], [0.2, 0.2]])
    p_s, p_x = marginals(j)
    np.testing.assert_allclose(p_s, [0.6, 0.4])
    np.testing.assert_allclose(p_x, [0.5, 0.5])
    assert j.s_labels == ("s0", "s1")
    assert j.x_labels == ("x0", "x1")


def test_validate_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        validate_joint([[0.3, 0.3], [0.2, 0.3]])


def test_renormalize_is_opt_in():
    j = validate_joint([[0.3, 0.3], [0.2, 0.3]], renormalize=True)
    assert j.pmf.sum() == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(j.pmf, np.array([[0.3, 0.3], [0.2, 0.3]]) / 1.1)


@pytest.mark.parametrize(
    "matrix, exc",
    [
        ([[0.6, -0.1], [0.3, 0.2]], NegativeEntry),
        ([[0.5, 0.5], [0.0, 0.0]], DeadSymbol),
        ([[0.5, 0.0], [0.5, 0.0]], DeadSymbol),
        ([[0.5, 0.5]], None),
        ([0.5, 0.5], DimensionMismatch),
        ([[0.5, 0.5], [0.0]], DimensionMismatch),
    ],
)
def test_validate_errors(matrix, exc):
    if exc is None:
        validate_joint(matrix)
    else:
        with pytest.raises(exc):
            validate_joint(matrix)


def test_label_checks():
    with pytest.raises(DimensionMismatch):
        validate_joint([[0.5, 0.5]], ["s"], ["a"])
    with pytest.raises(DimensionMismatch):
        validate_joint([[0.5, 0.5]], ["s"], ["a", "a"])


def test_zero_cells_allowed_with_positive_marginals():
    j = validate_joint([[0.5, 0.0], [0.25, 0.25]])
    assert j.pmf[0, 1] == 0


def test_drop_dead_symbols():
    j = validate_joint([[0.5, 0.0, 0.3], [0.0, 0.0, 0.0], [0.1, 0.0, 0.1]],
                       x_labels=["a", "b", "c"], drop_dead_symbols=True)
    assert j.shape == (2, 2)
    assert j.x_labels == ("a", "c")
    assert j.s_labels == ("s0", "s2")
    assert j.pmf.sum() == pytest.approx(1.0)


def test_immutable(toy):
    with pytest.raises(ValueError):
        toy.pmf[0, 0] = 0.5


def test_toy_marginals(toy):
    p_s, p_x = marginals(toy)
    np.testing.assert_allclose(p_s, [0.6, 0.4], atol=1e-15)
    # hand multiplication of the toy conditional by the prior
    assert p_x[2] == pytest.approx(0.6 * 0.7 + 0.4 * 0.1, abs=1e-15)
    assert p_x[2] == pytest.approx(0.46, abs=1e-15)
    assert p_x[3] == pytest.approx(0.6 * 0.05 + 0.4 * 0.2, abs=1e-15)


def test_entropy_uniform():
    j = validate_joint(np.full((2, 4), 1 / 8))
    assert entropy_x(j) == pytest.approx(math.log(4), abs=1e-12)
    assert entropy_x(validate_joint([[0.25, 0.25], [0.25, 0.25]])) == pytest.approx(math.log(2))


def test_entropy_toy(toy):
    # -sum p ln p over p_x = (0.36, 0.07, 0.46, 0.11), evaluated with math.log
    assert entropy_x(toy) == pytest.approx(1.1539461353172153, abs=1e-12)
    assert to_bits(entropy_x(toy)) == pytest.approx(1.1539461353172153 / math.log(2))


def test_mutual_information_independent():
    j = joint_from_conditional([[0.25, 0.75], [0.25, 0.75]], [0.3, 0.7])
    assert mutual_information(j) == pytest.approx(0.0, abs=1e-15)


def test_random_joint_shape_and_determinism():
    j = random_joint(15, 20, seed=7)
    assert j.shape == (15, 20)
    assert j.pmf.sum() == pytest.approx(1.0, abs=1e-12)
    a = random_joint(2, 2, seed=3)
    b = random_joint(2, 2, seed=3)
    assert np.array_equal(a.pmf, b.pmf)
    assert not np.array_equal(a.pmf, random_joint(2, 2, seed=4).pmf)


def test_random_joint_marginals_positive():
    for seed in range(100):
        j = random_joint(20, 30, seed)
        assert np.all(j.p_s > 0) and np.all(j.p_x > 0)


def test_random_joint_bad_dimensions():
    with pytest.raises(BadDimensions):
        random_joint(1, 5, 0)


def test_derive_seed_stable():
    assert derive_seed(5, 3) == derive_seed(5, 3)
    assert derive_seed(5, 3) != derive_seed(5, 4)
    assert derive_seed(5, 3) != derive_seed(6, 3)
    assert 0 <= derive_seed(0, 0) < 2**64


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_entropy_bounds(ns, nx, seed):
    j = random_joint(ns, nx, seed)
    h = entropy_x(j)
    assert 0 <= h <= math.log(nx) + 1e-12
    assert abs(j.pmf.sum() - 1) <= j.tol
