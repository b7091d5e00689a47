"""Discrete joint distributions p(s, x) and basic information quantities.

All logarithms are natural; every information quantity is in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import entr

DEFAULT_TOL = 1e-9


class DistributionError(ValueError):
    """Base class for invalid joint distributions."""


class NegativeEntry(DistributionError):
    pass


class NotNormalized(DistributionError):
    pass


class DeadSymbol(DistributionError):
    """A symbol of S or X has zero marginal probability."""


class DimensionMismatch(DistributionError):
    pass


class BadDimensions(DistributionError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    """Return the pinned generator (PCG64) for ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(base_seed: int, index: int) -> int:
    """Derive a 64-bit child seed for trial ``index`` of a run.

    Uses ``numpy.random.SeedSequence((base_seed, index))``, so the seed of a
    given trial does not depend on how many trials are run.
    """
    ss = np.random.SeedSequence((int(base_seed), int(index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A validated joint pmf p(s, x) with rows indexed by S and columns by X.

    Construct through :func:`validate_joint` (or :func:`random_joint`); the
    constructor itself does not validate.
    """

    s_labels: tuple[str, ...]
    x_labels: tuple[str, ...]
    pmf: np.ndarray
    tol: float = DEFAULT_TOL
    p_s: np.ndarray = field(init=False, repr=False)
    p_x: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pmf = np.array(self.pmf, dtype=float)
        pmf.setflags(write=False)
        p_s = pmf.sum(axis=1)
        p_x = pmf.sum(axis=0)
        p_s.setflags(write=False)
        p_x.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "p_s", p_s)
        object.__setattr__(self, "p_x", p_x)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pmf.shape

    @property
    def num_s(self) -> int:
        return self.pmf.shape[0]

    @property
    def num_x(self) -> int:
        return self.pmf.shape[1]

    def x_given_s(self) -> np.ndarray:
        """p(x|s) as an |S| x |X| row-stochastic matrix."""
        return self.pmf / self.p_s[:, None]

    def s_given_x(self) -> np.ndarray:
        """p(s|x) as an |S| x |X| column-stochastic matrix."""
        return self.pmf / self.p_x[None, :]

    def x_index(self, label: str) -> int:
        return self.x_labels.index(label)

    def to_dict(self) -> dict:
        return {
            "s_labels": list(self.s_labels),
            "x_labels": list(self.x_labels),
            "pmf": self.pmf.tolist(),
            "tol": self.tol,
        }


def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def validate_joint(
    raw_matrix,
    s_labels: Sequence[str] | None = None,
    x_labels: Sequence[str] | None = None,
    tol: float = DEFAULT_TOL,
    renormalize: bool = False,
    drop_dead_symbols: bool = False,
) -> JointDistribution:
    """Check ``raw_matrix`` and wrap it as a :class:`JointDistribution`.

    Parameters
    ----------
    raw_matrix : array_like, shape (|S|, |X|)
        Joint probabilities p(s, x). Zero cells are allowed as long as no
        whole row or column is zero.
    s_labels, x_labels : sequence of str, optional
        Symbol names. Defaults to ``s0, s1, ...`` and ``x0, x1, ...``.
    tol : float
        Allowed deviation of the total mass from 1.
    renormalize : bool
        Scale the matrix by the inverse of its sum before checking.
    drop_dead_symbols : bool
        Remove all-zero rows and columns (and their labels) instead of
        raising :class:`DeadSymbol`; the remainder is renormalized.

    Raises
    ------
    DimensionMismatch, NegativeEntry, NotNormalized, DeadSymbol
    """
    try:
        pmf = np.array(raw_matrix, dtype=float)
    except ValueError as exc:
        raise DimensionMismatch(f"matrix is not rectangular: {exc}") from None
    if pmf.ndim != 2 or pmf.shape[0] == 0 or pmf.shape[1] == 0:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {pmf.shape}")
    if not np.all(np.isfinite(pmf)):
        raise DistributionError("matrix contains non-finite entries")

    n_s, n_x = pmf.shape
    s_labels = _default_labels("s", n_s) if s_labels is None else tuple(str(v) for v in s_labels)
    x_labels = _default_labels("x", n_x) if x_labels is None else tuple(str(v) for v in x_labels)
    if len(s_labels) != n_s or len(x_labels) != n_x:
        raise DimensionMismatch(
            f"labels ({len(s_labels)}, {len(x_labels)}) do not match matrix shape {pmf.shape}"
        )
    for name, labels in (("s_labels", s_labels), ("x_labels", x_labels)):
        if len(set(labels)) != len(labels):
            raise DimensionMismatch(f"{name} contains duplicates")

    if np.any(pmf < 0):
        i, j = np.argwhere(pmf < 0)[0]
        raise NegativeEntry(f"p({s_labels[i]}, {x_labels[j]}) = {pmf[i, j]} < 0")

    total = pmf.sum()
    if renormalize:
        if total <= 0:
            raise NotNormalized("cannot renormalize a matrix with zero mass")
        pmf = pmf / total
    elif abs(total - 1.0) > tol:
        raise NotNormalized(f"entries sum to {total!r}, not 1 (tol={tol})")

    row_dead = pmf.sum(axis=1) == 0
    col_dead = pmf.sum(axis=0) == 0
    if row_dead.any() or col_dead.any():
        if not drop_dead_symbols:
            dead = [s_labels[i] for i in np.flatnonzero(row_dead)]
            dead += [x_labels[j] for j in np.flatnonzero(col_dead)]
            raise DeadSymbol(f"zero marginal probability for symbols {dead}")
        pmf = pmf[~row_dead][:, ~col_dead]
        pmf = pmf / pmf.sum()
        s_labels = tuple(lab for lab, d in zip(s_labels, row_dead) if not d)
        x_labels = tuple(lab for lab, d in zip(x_labels, col_dead) if not d)

    return JointDistribution(s_labels, x_labels, pmf, tol)


def joint_from_conditional(p_x_given_s, p_s, s_labels=None, x_labels=None) -> JointDistribution:
    """Build p(s, x) = p(s) p(x|s) from a row-stochastic conditional."""
    cond = np.asarray(p_x_given_s, dtype=float)
    prior = np.asarray(p_s, dtype=float)
    return validate_joint(prior[:, None] * cond, s_labels, x_labels)


def marginals(joint: JointDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(p_s, p_x)``."""
    return joint.p_s, joint.p_x


def entropy(p) -> float:
    """Shannon entropy of a probability vector in nats (0 ln 0 = 0)."""
    return float(entr(np.asarray(p, dtype=float)).sum())


def entropy_x(joint: JointDistribution) -> float:
    """H(X) in nats."""
    return entropy(joint.p_x)


def mutual_information(joint: JointDistribution) -> float:
    """I(S; X) in nats."""
    pmf = joint.pmf
    mask = pmf > 0
    outer = np.outer(joint.p_s, joint.p_x)
    return float(np.sum(pmf[mask] * np.log(pmf[mask] / outer[mask])))


def random_joint(num_s: int, num_x: int, seed: int) -> JointDistribution:
    """Draw a joint pmf with i.i.d. uniform(0, 1) cells, normalized to sum 1.

    The matrix is a deterministic function of ``seed`` (PCG64 generator).
    """
    if num_s < 2 or num_x < 2:
        raise BadDimensions(f"need |S| >= 2 and |X| >= 2, got ({num_s}, {num_x})")
    cells = make_rng(seed).random((num_s, num_x))
    return validate_joint(cells / cells.sum())


def to_bits(nats: float) -> float:
    return nats / math.log(2)
