"""Alpha-privacy watchdog: high-risk partition and X-invariant randomization.

Symbols whose log alpha-lift exceeds a threshold epsilon are collected into a
high-risk set. Low-risk symbols are released as they are, high-risk symbols
are randomized among themselves. Randomizing with a distribution R that does
not depend on the input (the X-invariant scheme) gives every high-risk output
the same alpha-lift, the merged lift, and no watchdog randomization can do
better on either the worst-case or the expected alpha-lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import logsumexp

from .lift import Alpha, AlphaLike, as_alpha, log_alpha_lift_array
from .probability import DimensionMismatch, JointDistribution, validate_joint

ROW_TOL = 1e-12


class EmptyHighRisk(ValueError):
    pass


class BadR(ValueError):
    pass


class BadMechanism(ValueError):
    pass


def _as_index_tuple(indices, num_x: int) -> tuple[int, ...]:
    out = tuple(sorted({int(i) for i in indices}))
    if out and (out[0] < 0 or out[-1] >= num_x):
        raise IndexError(f"symbol index out of range for |X| = {num_x}: {out}")
    return out


def merged_log_lift(joint: JointDistribution, high_risk: Sequence[int], alpha: AlphaLike) -> float | None:
    """ln of the alpha-lift of the merged super-symbol formed by ``high_risk``.

    Returns None for an empty set. Merging the whole alphabet leaves Y
    independent of S, so the value is exactly 0 in that case.
    """
    alpha = as_alpha(alpha)
    hr = _as_index_tuple(high_risk, joint.num_x)
    if not hr:
        return None
    if len(hr) == joint.num_x:
        return 0.0
    # joint of S and the merged output: p(s, X^c) next to the low-risk columns
    low = [i for i in range(joint.num_x) if i not in set(hr)]
    p_s_hr = joint.pmf[:, list(hr)].sum(axis=1)
    merged = np.column_stack([p_s_hr, joint.pmf[:, low]])
    return float(log_alpha_lift_array(merged, alpha)[0])


def merged_lift(joint: JointDistribution, high_risk: Sequence[int], alpha: AlphaLike) -> float | None:
    log_val = merged_log_lift(joint, high_risk, alpha)
    return None if log_val is None else math.exp(log_val)


@dataclass(frozen=True)
class WatchdogPartition:
    """The cut of X into low-risk and high-risk symbols.

    ``epsilon`` is None when the cut was given as an explicit set rather than
    obtained by thresholding.
    """

    alpha: Alpha
    epsilon: float | None
    x_labels: tuple[str, ...]
    low_risk: tuple[int, ...]
    high_risk: tuple[int, ...]
    log_merged_lift: float | None
    high_risk_mass: float

    @property
    def merged_lift(self) -> float | None:
        if self.log_merged_lift is None:
            return None
        return math.exp(self.log_merged_lift)

    @property
    def num_x(self) -> int:
        return len(self.x_labels)

    def high_risk_labels(self) -> list[str]:
        return [self.x_labels[i] for i in self.high_risk]


def partition_from_set(
    joint: JointDistribution, alpha: AlphaLike, high_risk: Sequence[int], epsilon: float | None = None
) -> WatchdogPartition:
    """Partition with an explicitly chosen high-risk set."""
    alpha = as_alpha(alpha)
    hr = _as_index_tuple(high_risk, joint.num_x)
    low = tuple(i for i in range(joint.num_x) if i not in set(hr))
    if len(hr) == joint.num_x:
        mass = 1.0
    else:
        mass = float(joint.p_x[list(hr)].sum()) if hr else 0.0
    return WatchdogPartition(
        alpha=alpha,
        epsilon=epsilon,
        x_labels=joint.x_labels,
        low_risk=low,
        high_risk=hr,
        log_merged_lift=merged_log_lift(joint, hr, alpha),
        high_risk_mass=mass,
    )


def partition(joint: JointDistribution, alpha: AlphaLike, epsilon: float) -> WatchdogPartition:
    """Threshold ln ell_alpha(x) at ``epsilon``; ties stay low-risk."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    alpha = as_alpha(alpha)
    log_al = log_alpha_lift_array(joint.pmf, alpha)
    hr = np.flatnonzero(log_al > epsilon)
    return partition_from_set(joint, alpha, hr, epsilon=float(epsilon))


@dataclass(frozen=True, eq=False)
class Mechanism:
    """Row-stochastic channel p(y|x), rows indexed by input symbols."""

    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]
    transition: np.ndarray

    def __post_init__(self):
        t = np.array(self.transition, dtype=float)
        if t.ndim != 2 or t.shape != (len(self.input_labels), len(self.output_labels)):
            raise DimensionMismatch(
                f"transition shape {t.shape} does not match labels "
                f"({len(self.input_labels)}, {len(self.output_labels)})"
            )
        if np.any(t < 0) or np.any(t > 1):
            raise BadMechanism("transition entries must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(t.sum(axis=1) - 1.0) > ROW_TOL)
        if bad.size:
            raise BadMechanism(f"rows {bad.tolist()} do not sum to 1")
        t.setflags(write=False)
        object.__setattr__(self, "input_labels", tuple(self.input_labels))
        object.__setattr__(self, "output_labels", tuple(self.output_labels))
        object.__setattr__(self, "transition", t)

    @classmethod
    def identity(cls, labels: Sequence[str]) -> "Mechanism":
        labels = tuple(labels)
        return cls(labels, labels, np.eye(len(labels)))

    def to_dict(self) -> dict:
        return {
            "input_labels": list(self.input_labels),
            "output_labels": list(self.output_labels),
            "transition": self.transition.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Mechanism":
        return cls(tuple(data["input_labels"]), tuple(data["output_labels"]), data["transition"])


def watchdog_mechanism(part: WatchdogPartition, randomization) -> Mechanism:
    """Embed a |X^c| x |X^c| randomization r(y|x) into the watchdog form.

    Low-risk symbols map to themselves; row i of ``randomization`` is the
    output distribution of the i-th high-risk symbol over the high-risk set.
    """
    hr = list(part.high_risk)
    r = np.asarray(randomization, dtype=float)
    if r.shape != (len(hr), len(hr)):
        raise DimensionMismatch(f"randomization must be {len(hr)}x{len(hr)}, got {r.shape}")
    t = np.zeros((part.num_x, part.num_x))
    low = list(part.low_risk)
    t[low, low] = 1.0
    t[np.ix_(hr, hr)] = r
    return Mechanism(part.x_labels, part.x_labels, t)


def x_invariant_mechanism(part: WatchdogPartition, R=None) -> Mechanism:
    """Watchdog mechanism with r(y|x) = R(y) for every high-risk x.

    ``R`` defaults to the uniform distribution over the high-risk set.
    """
    k = len(part.high_risk)
    if k == 0:
        if R is not None and len(np.atleast_1d(R)) != 0:
            raise BadR("R given but the high-risk set is empty")
        return Mechanism.identity(part.x_labels)
    if R is None:
        R = np.full(k, 1.0 / k)
    R = np.asarray(R, dtype=float)
    if R.shape != (k,) or np.any(R < 0) or abs(R.sum() - 1.0) > ROW_TOL:
        raise BadR(f"R must be a distribution over the {k} high-risk symbols, got {R}")
    return watchdog_mechanism(part, np.tile(R, (k, 1)))


def apply_mechanism(joint: JointDistribution, mechanism: Mechanism) -> JointDistribution:
    """Joint of (S, Y) under the Markov chain S - X - Y.

    Output symbols that receive exactly zero mass are dropped.
    """
    if len(mechanism.input_labels) != joint.num_x:
        raise DimensionMismatch(
            f"mechanism expects {len(mechanism.input_labels)} inputs, joint has |X| = {joint.num_x}"
        )
    p_sy = joint.pmf @ mechanism.transition
    return validate_joint(
        p_sy, joint.s_labels, mechanism.output_labels, tol=joint.tol, drop_dead_symbols=True
    )


def output_log_alpha_lift(joint: JointDistribution, mechanism: Mechanism, alpha: AlphaLike) -> np.ndarray:
    """ln ell_alpha(y) for every output y, from p(y|s) and p(y) directly.

    Outputs with p(y) = 0 get nan.
    """
    alpha = as_alpha(alpha)
    if len(mechanism.input_labels) != joint.num_x:
        raise DimensionMismatch("mechanism input dimension does not match |X|")
    t = mechanism.transition
    p_y_given_s = joint.x_given_s() @ t
    p_y = joint.p_x @ t
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.log(p_y_given_s) - np.log(p_y)[None, :]
        if alpha.is_infinite:
            out = log_ratio.max(axis=0)
        else:
            a = alpha.order
            out = logsumexp(np.log(joint.p_s)[:, None] + a * log_ratio, axis=0) / a
    return np.where(p_y > 0, out, np.nan)


def output_alpha_lift(joint: JointDistribution, mechanism: Mechanism, alpha: AlphaLike) -> np.ndarray:
    return np.exp(output_log_alpha_lift(joint, mechanism, alpha))


def attainable(part: WatchdogPartition, epsilon_prime: float) -> bool:
    """Whether some watchdog randomization keeps every high-risk output's
    log alpha-lift at or below ``epsilon_prime``."""
    if part.log_merged_lift is None:
        raise EmptyHighRisk("attainability is defined only for a non-empty high-risk set")
    return epsilon_prime >= part.log_merged_lift


class OptimalLeakage(NamedTuple):
    min_max_sibson: float
    min_sibson: float


def optimal_leakage(joint: JointDistribution, part: WatchdogPartition) -> OptimalLeakage:
    """Smallest maximum-Sibson and Sibson MI of S and Y over all watchdog
    randomizations of ``part``, attained by any X-invariant scheme."""
    alpha = part.alpha
    log_al = log_alpha_lift_array(joint.pmf, alpha)
    low = list(part.low_risk)
    terms_max = list(log_al[low])
    terms_mean = list(np.log(joint.p_x[low]) + log_al[low])
    if part.high_risk:
        terms_max.append(part.log_merged_lift)
        terms_mean.append(math.log(part.high_risk_mass) + part.log_merged_lift)
    return OptimalLeakage(
        min_max_sibson=alpha.prefactor * float(np.max(terms_max)),
        min_sibson=alpha.prefactor * float(logsumexp(terms_mean)),
    )
