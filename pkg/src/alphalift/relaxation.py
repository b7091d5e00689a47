"""High-risk selection by absolute log-lift and its two relaxations.

The classical watchdog flags x when ``max_s |i(s, x)| > eps_bar``. Two ways of
shrinking that set are provided:

* :func:`combined_high_risk` additionally requires ``ln ell_alpha(x) > epsilon``;
* :func:`delta_refine` greedily releases flagged symbols as long as the
  probability of an absolute log-lift above ``eps_bar`` after X-invariant
  merging stays within ``delta`` and no log-lift exceeds ``eps_max``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lift import Alpha, as_alpha, log_alpha_lift_array, log_lift_array
from .probability import JointDistribution


REMOVAL_ORDERS = ("min_mass", "max_abs_loglift")


@dataclass(frozen=True)
class RelaxationConfig:
    eps_bar: float
    alpha: Alpha
    epsilon: float
    delta: float
    eps_max: float = 4.0
    removal_order: str = "min_mass"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not self.eps_bar > 0:
            raise ValueError(f"eps_bar must be > 0, got {self.eps_bar}")
        if not 0 <= self.delta <= 1:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if not self.eps_max >= self.eps_bar:
            raise ValueError(f"eps_max ({self.eps_max}) must be >= eps_bar ({self.eps_bar})")
        if self.removal_order not in REMOVAL_ORDERS:
            raise ValueError(f"removal_order must be one of {REMOVAL_ORDERS}")


def max_abs_log_lift(joint: JointDistribution) -> np.ndarray:
    """max_s |i(s, x)| per symbol; zero cells count as +inf."""
    return np.abs(log_lift_array(joint.pmf)).max(axis=0)


def abs_loglift_high_risk(joint: JointDistribution, eps_bar: float) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(max_abs_log_lift(joint) > eps_bar))


def combined_high_risk(joint: JointDistribution, config: RelaxationConfig) -> tuple[int, ...]:
    """Symbols flagged by both the absolute log-lift and the alpha-lift test."""
    if config.epsilon >= config.eps_bar:
        warnings.warn(
            f"epsilon ({config.epsilon}) is not below eps_bar ({config.eps_bar})",
            stacklevel=2,
        )
    log_al = log_alpha_lift_array(joint.pmf, config.alpha)
    mask = (log_al > config.epsilon) & (max_abs_log_lift(joint) > config.eps_bar)
    return tuple(int(i) for i in np.flatnonzero(mask))


def _merged_abs_log_lift(joint: JointDistribution, merged: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """(|i(s, M)|, p(s, M)) for the merged set M."""
    p_sm = joint.pmf[:, list(merged)].sum(axis=1)
    p_m = p_sm.sum()
    with np.errstate(divide="ignore"):
        abs_ll = np.abs(np.log(p_sm) - np.log(joint.p_s) - math.log(p_m))
    return abs_ll, p_sm


def release_cost(
    joint: JointDistribution, current: Sequence[int], x: int, eps_bar: float, abs_log_lift=None
) -> tuple[float, float]:
    """Exceedance mass and largest |log-lift| if ``x`` leaves ``current``.

    Returns ``(mass, worst)``: ``mass`` is the probability of a cell with
    ``|i| > eps_bar`` among the released symbols (everything outside
    ``current`` plus ``x``) and the merged remainder ``current - {x}``;
    ``worst`` is the largest |log-lift| over those same cells. An empty
    remainder contributes nothing. ``abs_log_lift`` may pass a precomputed
    ``|log_lift_array(joint.pmf)|``.
    """
    if abs_log_lift is None:
        abs_log_lift = np.abs(log_lift_array(joint.pmf))
    current = set(current)
    released = [i for i in range(joint.num_x) if i not in current or i == x]
    remainder = sorted(current - {x})
    abs_ll = abs_log_lift[:, released]
    cells = joint.pmf[:, released]
    over = abs_ll > eps_bar
    mass = float(cells[over].sum())
    worst = float(abs_ll.max()) if released else 0.0
    if remainder:
        m_abs, p_sm = _merged_abs_log_lift(joint, remainder)
        mass += float(p_sm[m_abs > eps_bar].sum())
        worst = max(worst, float(m_abs.max()))
    return mass, worst


def removable(
    joint: JointDistribution,
    current: Sequence[int],
    x: int,
    eps_bar: float,
    delta: float,
    eps_max: float,
    abs_log_lift=None,
) -> bool:
    mass, worst = release_cost(joint, current, x, eps_bar, abs_log_lift)
    return mass <= delta and worst <= eps_max


def delta_refine(
    joint: JointDistribution,
    initial_set: Sequence[int],
    eps_bar: float,
    delta: float,
    eps_max: float = math.inf,
    order: str = "min_mass",
    removed: list | None = None,
) -> tuple[int, ...]:
    """Greedy release of flagged symbols under the delta and eps_max budgets.

    One symbol is released per step, chosen among those whose release keeps
    the exceedance mass within ``delta`` and every |log-lift| within
    ``eps_max`` (see :func:`release_cost`):

    * ``"min_mass"`` picks the candidate with the smallest resulting mass;
    * ``"max_abs_loglift"`` picks the first candidate in ascending order of
      ``max_s |i(s, x)|``.

    Index breaks ties. Stops when no candidate qualifies. Released symbols
    are appended, in order, to ``removed`` when given.
    """
    if order not in REMOVAL_ORDERS:
        raise ValueError(f"order must be one of {REMOVAL_ORDERS}, got {order!r}")
    abs_ll = np.abs(log_lift_array(joint.pmf))
    score = abs_ll.max(axis=0)
    current = sorted(int(i) for i in initial_set)
    while current:
        if order == "min_mass":
            best = None
            for x in current:
                mass, worst = release_cost(joint, current, x, eps_bar, abs_ll)
                if mass <= delta and worst <= eps_max and (best is None or mass < best[0]):
                    best = (mass, x)
            pick = None if best is None else best[1]
        else:
            pick = next(
                (x for x in sorted(current, key=lambda i: (score[i], i))
                 if removable(joint, current, x, eps_bar, delta, eps_max, abs_ll)),
                None,
            )
        if pick is None:
            break
        current.remove(pick)
        if removed is not None:
            removed.append(pick)
    return tuple(current)


def realized_delta(joint: JointDistribution, final_set: Sequence[int], eps_bar: float) -> float:
    """Probability of an output cell with ``|i(s, y)| > eps_bar`` after
    X-invariant merging of ``final_set``."""
    if not eps_bar > 0:
        raise ValueError(f"eps_bar must be > 0, got {eps_bar}")
    final = sorted(int(i) for i in final_set)
    low = [i for i in range(joint.num_x) if i not in set(final)]
    abs_ll = np.abs(log_lift_array(joint.pmf))[:, low]
    total = float(joint.pmf[:, low][abs_ll > eps_bar].sum())
    if final and len(final) < joint.num_x:
        m_abs, p_sm = _merged_abs_log_lift(joint, final)
        total += float(p_sm[m_abs > eps_bar].sum())
    return total
