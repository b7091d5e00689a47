"""Monte-Carlo falsification of the optimality of X-invariant randomization.

Random watchdog randomizations are drawn and their output alpha-lifts are
compared against the merged lift. Output alpha-lifts are evaluated here
straight from ``(sum_s p(s) p(y|s)^alpha)^(1/alpha) / p(y)`` rather than
through the log-domain code in :mod:`alphalift.lift`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lift import Alpha
from .probability import JointDistribution, derive_seed, make_rng
from .watchdog import (
    EmptyHighRisk,
    Mechanism,
    WatchdogPartition,
    watchdog_mechanism,
)

DEFAULT_TOL = 1e-9
EQUALITY_TOL = 1e-10
STRICT_TOL = 1e-12
CHUNK = 1000


class ViolationFound(AssertionError):
    """A sampled randomization beat the merged-lift bound."""

    def __init__(self, message, report=None, mechanism: Mechanism | None = None):
        super().__init__(message)
        self.report = report
        self.mechanism = mechanism


def _random_randomizations(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """``n`` random k x k row-stochastic matrices (normalized uniforms)."""
    u = rng.random((n, k, k))
    return u / u.sum(axis=2, keepdims=True)


def _deterministic_randomizations(k: int) -> np.ndarray:
    """All k^k maps of the high-risk set into itself, as 0/1 matrices."""
    maps = list(itertools.product(range(k), repeat=k))
    out = np.zeros((len(maps), k, k))
    for n, targets in enumerate(maps):
        out[n, np.arange(k), targets] = 1.0
    return out


def sample_watchdog_mechanism(part: WatchdogPartition, seed: int) -> Mechanism:
    """A random watchdog mechanism for ``part``: identity on the low-risk
    symbols, an independent random distribution over the high-risk set for
    each high-risk row."""
    k = len(part.high_risk)
    if k == 0:
        raise EmptyHighRisk("nothing to randomize")
    r = _random_randomizations(make_rng(seed), 1, k)[0]
    return watchdog_mechanism(part, r)


def _output_terms(joint: JointDistribution, hr: list[int], r: np.ndarray, alpha: Alpha):
    """Per-output norms ``||p(y|.)||_alpha`` and masses ``p(y)`` for a stack
    of randomizations ``r`` of shape (n, k, k)."""
    cond = joint.x_given_s()[:, hr]                      # (S, k): p(x|s)
    p_y_given_s = np.einsum("sx,nxy->nsy", cond, r)      # (n, S, k)
    p_y = np.einsum("x,nxy->ny", joint.p_x[hr], r)       # (n, k)
    if alpha.is_infinite:
        norms = p_y_given_s.max(axis=1)
    else:
        a = alpha.order
        norms = np.einsum("s,nsy->ny", joint.p_s, p_y_given_s**a) ** (1.0 / a)
    return norms, p_y


def _merged_norm(joint: JointDistribution, hr: list[int], alpha: Alpha) -> float:
    """``||p(X^c|.)||_alpha`` computed from p(x|s)."""
    p_hr_given_s = joint.x_given_s()[:, hr].sum(axis=1)
    if alpha.is_infinite:
        return float(p_hr_given_s.max())
    a = alpha.order
    return float(np.dot(joint.p_s, p_hr_given_s**a) ** (1.0 / a))


def output_lifts(joint: JointDistribution, part: WatchdogPartition, randomizations) -> np.ndarray:
    """Alpha-lifts of the high-risk outputs for each randomization (nan where
    an output gets no mass)."""
    r = np.asarray(randomizations, dtype=float)
    if r.ndim == 2:
        r = r[None]
    norms, p_y = _output_terms(joint, list(part.high_risk), r, part.alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p_y > 0, norms / p_y, np.nan)


@dataclass
class OracleReport:
    merged_lift: float
    best_sampled_max: float
    best_sampled_expected: float
    expected_bound: float
    num_samples: int
    num_fixed: int
    violations: int
    minkowski_violations: int
    invariant_max_gap: float
    invariant_expected_gap: float
    alpha: str = ""
    offending: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.minkowski_violations == 0

    def to_dict(self) -> dict:
        return asdict(self)


def _iter_batches(k: int, num_samples: int, seed: int):
    """Fixed probes first (X-invariant, then every deterministic map), then
    random draws in chunks seeded by ``derive_seed(seed, chunk)``."""
    fixed = np.concatenate([np.full((1, k, k), 1.0 / k), _deterministic_randomizations(k)])
    yield fixed
    for c in range(math.ceil(num_samples / CHUNK)):
        n = min(CHUNK, num_samples - c * CHUNK)
        yield _random_randomizations(make_rng(derive_seed(seed, c)), n, k)


def verify_x_invariant_optimality(
    joint: JointDistribution,
    part: WatchdogPartition,
    num_samples: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    raise_on_violation: bool = True,
) -> OracleReport:
    """Check that no sampled watchdog randomization gets a lower worst-case
    or expected high-risk alpha-lift than the X-invariant one.

    Sample 0 is the uniform X-invariant randomization, followed by all
    deterministic maps of the high-risk set and ``num_samples`` random ones.
    """
    k = len(part.high_risk)
    if k == 0:
        raise EmptyHighRisk("verification needs a non-empty high-risk set")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    hr = list(part.high_risk)
    alpha = part.alpha
    bar = part.merged_lift
    p_hr = float(joint.p_x[hr].sum())
    expected_bound = p_hr * bar
    minkowski_rhs = _merged_norm(joint, hr, alpha)

    best_max = math.inf
    best_exp = math.inf
    violations = 0
    mink_violations = 0
    offending = []
    inv_max_gap = inv_exp_gap = math.nan
    num_fixed = 0
    for b, r in enumerate(_iter_batches(k, num_samples, seed)):
        norms, p_y = _output_terms(joint, hr, r, alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            lifts = np.where(p_y > 0, norms / p_y, -np.inf)
        worst = lifts.max(axis=1)
        expected = norms.sum(axis=1)
        if b == 0:
            num_fixed = len(r)
            inv_max_gap = abs(worst[0] - bar)
            inv_exp_gap = abs(expected[0] - expected_bound)
        bad = (worst < bar - tol) | (expected < expected_bound - tol)
        mink_violations += int(np.sum(expected < minkowski_rhs - tol))
        if bad.any():
            violations += int(bad.sum())
            offending.extend(r[bad][:5].tolist())
        best_max = min(best_max, float(worst.min()))
        best_exp = min(best_exp, float(expected.min()))

    report = OracleReport(
        merged_lift=bar,
        best_sampled_max=best_max,
        best_sampled_expected=best_exp,
        expected_bound=expected_bound,
        num_samples=num_samples,
        num_fixed=num_fixed,
        violations=violations,
        minkowski_violations=mink_violations,
        invariant_max_gap=float(inv_max_gap),
        invariant_expected_gap=float(inv_exp_gap),
        alpha=str(alpha),
        offending=offending[:5],
    )
    if raise_on_violation and not report.passed:
        mech = watchdog_mechanism(part, offending[0]) if offending else None
        raise ViolationFound(
            f"{violations} bound violations, {mink_violations} Minkowski violations", report, mech
        )
    return report


def strict_tradeoff_check(lifts: np.ndarray, merged: float, tol: float = DEFAULT_TOL, strict: float = STRICT_TOL):
    """Evaluate the strict-tradeoff statement on rows of output lifts.

    For each row (nan = output without mass) the premise holds when at least
    two outputs carry mass and all but one are below ``merged - tol``; the
    conclusion is that the remaining one exceeds ``merged + strict``.
    Returns boolean arrays ``(premise, conclusion)``.
    """
    lifts = np.atleast_2d(lifts)
    live = ~np.isnan(lifts)
    n_live = live.sum(axis=1)
    below = (np.where(live, lifts, np.inf) < merged - tol).sum(axis=1)
    premise = (n_live >= 2) & (below >= n_live - 1)
    top = np.where(live, lifts, -np.inf).max(axis=1)
    conclusion = (below == n_live - 1) & (top > merged + strict)
    return premise, conclusion


def verify_strict_tradeoff(
    joint: JointDistribution,
    part: WatchdogPartition,
    num_samples: int,
    seed: int,
    tol: float = DEFAULT_TOL,
) -> int:
    """Count sampled randomizations where every high-risk output but one is
    strictly below the merged lift; raise if the last one fails to exceed it."""
    k = len(part.high_risk)
    if k < 2:
        raise ValueError("the strict tradeoff needs at least two high-risk symbols")
    triggered = 0
    for r in _iter_batches(k, num_samples, seed):
        lifts = output_lifts(joint, part, r)
        premise, conclusion = strict_tradeoff_check(lifts, part.merged_lift, tol)
        failed = premise & ~conclusion
        if failed.any():
            mech = watchdog_mechanism(part, r[np.argmax(failed)])
            raise ViolationFound("an output failed to exceed the merged lift", mechanism=mech)
        triggered += int(premise.sum())
    return triggered


# name used by the original interface description
verify_theorem1 = verify_x_invariant_optimality
