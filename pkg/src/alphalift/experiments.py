"""Privacy-utility experiments: alpha-lift ordering, PUT sweep and the
Monte-Carlo comparison of the two high-risk relaxations."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .lift import Alpha, AlphaLike, as_alpha, log_alpha_lift_array
from .probability import (
    JointDistribution,
    derive_seed,
    entropy,
    entropy_x,
    joint_from_conditional,
    random_joint,
)
from .relaxation import (
    RelaxationConfig,
    abs_loglift_high_risk,
    combined_high_risk,
    delta_refine,
    realized_delta,
)
from .watchdog import optimal_leakage, partition_from_set

DELTA_REFINEMENT = "delta_refinement"
ALPHA_LIFT_RELAXATION = "alpha_lift_relaxation"


# p(x|s) of the two-secret, four-symbol toy example; rows S = 1, 2
TOY_CONDITIONAL = np.array([
    [0.2, 0.05, 0.7, 0.05],
    [0.6, 0.1, 0.1, 0.2],
])
TOY_X_LABELS = ("a", "b", "c", "d")
TOY_S_LABELS = ("1", "2")


class DegenerateEntropy(ValueError):
    pass


def toy_joint(rho: float = 0.6) -> JointDistribution:
    """Toy joint p(s, x) = p(s) p(x|s) with p(S = 1) = rho."""
    return joint_from_conditional(
        TOY_CONDITIONAL, [rho, 1.0 - rho], TOY_S_LABELS, TOY_X_LABELS
    )


def example_surface(alpha: AlphaLike, rhos) -> np.ndarray:
    """alpha-lift of every toy symbol as p(S = 1) sweeps over ``rhos``.

    Returns an array of shape (len(rhos), 4); every rho must lie in (0, 1).
    """
    rhos = np.asarray(rhos, dtype=float)
    if np.any((rhos <= 0) | (rhos >= 1)):
        raise ValueError("rho must lie strictly between 0 and 1")
    prior = np.stack([rhos, 1.0 - rhos], axis=-1)
    stack = prior[:, :, None] * TOY_CONDITIONAL[None]
    return np.exp(log_alpha_lift_array(stack, alpha))


def alpha_lift_ordering(joint: JointDistribution, alpha: AlphaLike) -> list[int]:
    """Symbols by descending alpha-lift; equal values keep index order."""
    log_al = log_alpha_lift_array(joint.pmf, alpha)
    return [int(i) for i in np.argsort(-log_al, kind="stable")]


def merged_output_information(joint: JointDistribution, high_risk: Sequence[int]) -> float:
    """I(X; Y) when ``high_risk`` is merged into one output symbol."""
    hr = set(int(i) for i in high_risk)
    if len(hr) == joint.num_x:
        return 0.0
    low = [i for i in range(joint.num_x) if i not in hr]
    p = list(joint.p_x[low])
    if hr:
        p.append(float(joint.p_x[sorted(hr)].sum()))
    return entropy(p)


def nmil(joint: JointDistribution, high_risk: Sequence[int]) -> float:
    """Normalized mutual information loss (H(X) - I(X;Y)) / H(X)."""
    h = entropy_x(joint)
    if h <= 0:
        raise DegenerateEntropy("H(X) = 0")
    return (h - merged_output_information(joint, high_risk)) / h


@dataclass(frozen=True)
class PutCurvePoint:
    alpha: Alpha
    cut_index: int
    epsilon_equiv: float
    nmil: float
    min_sibson: float
    min_max_sibson: float


def put_sweep(joint: JointDistribution, alphas: Iterable[AlphaLike]) -> list[PutCurvePoint]:
    """Grow the high-risk set one symbol at a time along the alpha-lift ordering.

    ``epsilon_equiv`` of cut i is the log alpha-lift of the next symbol in the
    ordering, i.e. a threshold that reproduces the cut (nan for the full cut).
    """
    points = []
    for alpha in alphas:
        alpha = as_alpha(alpha)
        log_al = log_alpha_lift_array(joint.pmf, alpha)
        order = alpha_lift_ordering(joint, alpha)
        for i in range(joint.num_x + 1):
            part = partition_from_set(joint, alpha, order[:i])
            leak = optimal_leakage(joint, part)
            eps = float(log_al[order[i]]) if i < joint.num_x else math.nan
            points.append(
                PutCurvePoint(alpha, i, eps, nmil(joint, order[:i]), leak.min_sibson, leak.min_max_sibson)
            )
    return points


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    method: str
    nmil: float
    realized_delta: float


def run_trial(trial: int, seed: int, num_s: int, num_x: int, config: RelaxationConfig) -> list[TrialRecord]:
    joint = random_joint(num_s, num_x, seed)
    abs_set = abs_loglift_high_risk(joint, config.eps_bar)
    refined = delta_refine(
        joint, abs_set, config.eps_bar, config.delta, config.eps_max, order=config.removal_order
    )
    relaxed = combined_high_risk(joint, config)
    return [
        TrialRecord(trial, seed, DELTA_REFINEMENT, nmil(joint, refined),
                    realized_delta(joint, refined, config.eps_bar)),
        TrialRecord(trial, seed, ALPHA_LIFT_RELAXATION, nmil(joint, relaxed),
                    realized_delta(joint, relaxed, config.eps_bar)),
    ]


def _run_trial_args(args):
    return run_trial(*args)


def cdf_trials(
    num_trials: int,
    num_s: int,
    num_x: int,
    config: RelaxationConfig,
    base_seed: int,
    jobs: int = 1,
) -> list[TrialRecord]:
    """Run independent trials on fresh random joints; two records per trial.

    Trial t uses the joint drawn from ``derive_seed(base_seed, t)``, so results
    are identical for any ``jobs`` and earlier trials do not change when more
    are added.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be >= 1")
    tasks = [(t, derive_seed(base_seed, t), num_s, num_x, config) for t in range(num_trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_trial_args, tasks, chunksize=max(1, num_trials // (4 * jobs))))
    else:
        chunks = [run_trial(*task) for task in tasks]
    return [rec for chunk in chunks for rec in chunk]


def empirical_cdf(values: Sequence[float], at: float) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.mean(values <= at))


def records_by_method(records: Sequence[TrialRecord], method: str) -> list[TrialRecord]:
    return [r for r in records if r.method == method]


PUT_COLUMNS = ["alpha", "cut_index", "epsilon_equiv", "nmil", "min_sibson", "min_max_sibson"]
CDF_COLUMNS = ["trial", "seed", "method", "nmil", "realized_delta"]


def _fmt(value):
    if isinstance(value, Alpha):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return value


def put_rows(points: Sequence[PutCurvePoint]) -> list[dict]:
    return [{c: (str(p.alpha) if c == "alpha" else getattr(p, c)) for c in PUT_COLUMNS} for p in points]


def cdf_rows(records: Sequence[TrialRecord]) -> list[dict]:
    return [asdict(r) for r in records]


def write_csv(rows: Sequence[dict], columns: Sequence[str], fh=None) -> str | None:
    """Write ``rows`` as CSV to ``fh``, or return the text when ``fh`` is None.

    Floats are written with 12 significant digits.
    """
    out = io.StringIO() if fh is None else fh
    writer = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _fmt(row[c]) for c in columns})
    return out.getvalue() if fh is None else None
