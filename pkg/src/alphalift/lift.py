"""Lift, log-lift, alpha-lift and Sibson mutual information.

For a joint p(s, x) the lift is ``l(s, x) = p(s, x) / (p(s) p(x))`` and the
alpha-lift of a symbol x is the p(s)-weighted L_alpha norm of its lift column,

    ell_alpha(x) = (sum_s p(s) l(s, x)^alpha)^(1/alpha),

which tends to ``max_s l(s, x)`` as alpha grows. Finite orders are evaluated
as a log-sum-exp over log-lifts so that large alpha does not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import logsumexp

from .probability import JointDistribution


@dataclass(frozen=True)
class Alpha:
    """Order of the alpha-lift: a finite real > 1 or infinity.

    ``Alpha(math.inf)`` (also :data:`INF`) is the exact maximum-lift limit,
    not a large finite order.
    """

    order: float

    def __post_init__(self):
        order = float(self.order)
        if math.isnan(order) or order <= 1:
            raise ValueError(f"alpha must be > 1 (or infinity), got {self.order!r}")
        object.__setattr__(self, "order", order)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.order)

    @property
    def prefactor(self) -> float:
        """alpha / (alpha - 1); equals 1 at infinity."""
        if self.is_infinite:
            return 1.0
        return self.order / (self.order - 1.0)

    def __str__(self):
        return "inf" if self.is_infinite else f"{self.order:g}"

    @classmethod
    def parse(cls, text: str) -> "Alpha":
        text = str(text).strip().lower()
        if text in ("inf", "infinity", "∞"):
            return cls(math.inf)
        return cls(float(text))


INF = Alpha(math.inf)

AlphaLike = Union[Alpha, float, int, str]


def as_alpha(alpha: AlphaLike) -> Alpha:
    if isinstance(alpha, Alpha):
        return alpha
    if isinstance(alpha, str):
        return Alpha.parse(alpha)
    return Alpha(alpha)


def log_lift_array(pmf: np.ndarray) -> np.ndarray:
    """Log-lift ``ln p(s,x) - ln p(s) - ln p(x)`` for one or a stack of joints.

    ``pmf`` has shape (..., |S|, |X|). Zero cells map to ``-inf``.
    """
    pmf = np.asarray(pmf, dtype=float)
    p_s = pmf.sum(axis=-1, keepdims=True)
    p_x = pmf.sum(axis=-2, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(pmf) - np.log(p_s) - np.log(p_x)


def log_alpha_lift_array(pmf: np.ndarray, alpha: AlphaLike) -> np.ndarray:
    """ln ell_alpha(x) for every column of one or a stack of joints.

    Returns an array of shape (..., |X|). A column with zero mass gives nan.
    """
    alpha = as_alpha(alpha)
    pmf = np.asarray(pmf, dtype=float)
    ll = log_lift_array(pmf)
    if alpha.is_infinite:
        out = ll.max(axis=-2)
    else:
        p_s = pmf.sum(axis=-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_p_s = np.log(p_s)
            # -inf log-lifts drop out of the sum (exp(-inf) = 0)
            out = logsumexp(log_p_s + alpha.order * ll, axis=-2) / alpha.order
    p_x = pmf.sum(axis=-2)
    return np.where(p_x > 0, out, np.nan)


@dataclass(frozen=True, eq=False)
class LiftProfile:
    """Per-cell lift/log-lift and per-symbol alpha-lift of a joint."""

    alpha: Alpha
    lift: np.ndarray
    log_lift: np.ndarray
    alpha_lift: np.ndarray
    log_alpha_lift: np.ndarray

    @property
    def max_log_lift(self) -> float:
        return float(self.log_lift.max())

    def argmax(self) -> int:
        """Index of the symbol with the largest alpha-lift (first on ties)."""
        return int(np.argmax(self.log_alpha_lift))


def lift_profile(joint: JointDistribution, alpha: AlphaLike) -> LiftProfile:
    alpha = as_alpha(alpha)
    log_lift = log_lift_array(joint.pmf)
    lift = joint.pmf / np.outer(joint.p_s, joint.p_x)
    log_al = log_alpha_lift_array(joint.pmf, alpha)
    for arr in (lift, log_lift, log_al):
        arr.setflags(write=False)
    alpha_lift = np.exp(log_al)
    alpha_lift.setflags(write=False)
    return LiftProfile(alpha, lift, log_lift, alpha_lift, log_al)


def lift(joint: JointDistribution) -> np.ndarray:
    return joint.pmf / np.outer(joint.p_s, joint.p_x)


def log_lift(joint: JointDistribution) -> np.ndarray:
    return log_lift_array(joint.pmf)


def alpha_lift(joint: JointDistribution, alpha: AlphaLike) -> np.ndarray:
    return np.exp(log_alpha_lift_array(joint.pmf, alpha))


def sibson_mi(joint: JointDistribution, alpha: AlphaLike) -> float:
    """Sibson mutual information I_alpha(S; X) = prefactor * ln E[ell_alpha(X)].

    At infinity this is ``ln E[max_s l(s, X)]``.
    """
    alpha = as_alpha(alpha)
    log_al = log_alpha_lift_array(joint.pmf, alpha)
    log_mean = logsumexp(np.log(joint.p_x) + log_al)
    return alpha.prefactor * float(log_mean)


def sibson_mi_direct(joint: JointDistribution, alpha: AlphaLike) -> float:
    """Sibson MI from its defining sum over p(x|s), independent of the lift code.

    prefactor * ln sum_x (sum_s p(s) p(x|s)^alpha)^(1/alpha), or
    ln sum_x max_s p(x|s) at infinity.
    """
    alpha = as_alpha(alpha)
    cond = joint.x_given_s()
    if alpha.is_infinite:
        return float(np.log(cond.max(axis=0).sum()))
    a = alpha.order
    inner = (joint.p_s[:, None] * cond**a).sum(axis=0) ** (1.0 / a)
    return alpha.prefactor * float(np.log(inner.sum()))


def max_sibson_mi(joint: JointDistribution, alpha: AlphaLike) -> float:
    """Maximum Sibson MI: prefactor * ln max_x ell_alpha(x).

    At infinity this is the largest log-lift over all (s, x).
    """
    alpha = as_alpha(alpha)
    return alpha.prefactor * float(np.max(log_alpha_lift_array(joint.pmf, alpha)))
