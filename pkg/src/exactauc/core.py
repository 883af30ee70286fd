"""Shared domain types and strict AUC evaluation of linear scorers.

A linear scorer ``w`` ranks a point ``x`` by ``w . x``. Its empirical AUC on
a dataset is the fraction of (positive, negative) pairs it orders strictly
correctly; tied pairs earn nothing. Every AUC in this package is carried as
an integer pair count so solvers and oracles can be compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "LabeledPoint",
    "Dataset",
    "AucValue",
    "as_direction",
    "linear_scores",
    "count_strict_pairs",
    "evaluate_auc_direction",
    "count_satisfied_many",
    "OptResult",
]


@dataclass(frozen=True)
class LabeledPoint:
    """One sample: finite coordinates and a label in {+1, -1}."""

    coords: tuple[float, ...]
    label: int

    def __post_init__(self) -> None:
        if len(self.coords) < 1:
            raise ValueError("a point needs at least one coordinate")
        if not all(np.isfinite(c) for c in self.coords):
            raise ValueError(f"non-finite coordinate in {self.coords}")
        if self.label not in (1, -1):
            raise ValueError(f"label must be +1 or -1, got {self.label!r}")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labeled points in R^d stored row-wise.

    ``X`` has shape ``(n, d)`` and ``y`` holds +1/-1 labels. The per-class
    views ``positives`` and ``negatives`` keep the original row order.
    Either class may be empty here; optimizers check ``require_both_classes``.
    """

    X: NDArray[np.float64]
    y: NDArray[np.int64]
    positives: NDArray[np.float64] = field(init=False, repr=False)
    negatives: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=np.float64, copy=True)
        y = np.array(self.y, dtype=np.int64, copy=True).reshape(-1)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if len(y) != 1 else X.reshape(1, -1)
        if X.ndim != 2:
            raise ValueError(f"X must be 2-D, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} points but {y.shape[0]} labels")
        if X.shape[1] < 1:
            raise ValueError("dimension must be at least 1")
        if not np.all(np.isfinite(X)):
            raise ValueError("coordinates must be finite")
        bad = ~np.isin(y, (1, -1))
        if np.any(bad):
            raise ValueError(f"labels must be +1 or -1, got {y[bad][0]!r}")
        X.setflags(write=False)
        y.setflags(write=False)
        pos = X[y == 1]
        neg = X[y == -1]
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", neg)

    @classmethod
    def from_classes(cls, positives: ArrayLike, negatives: ArrayLike) -> "Dataset":
        pos = np.atleast_2d(np.asarray(positives, dtype=np.float64))
        neg = np.atleast_2d(np.asarray(negatives, dtype=np.float64))
        if pos.size == 0:
            pos = pos.reshape(0, neg.shape[1])
        if neg.size == 0:
            neg = neg.reshape(0, pos.shape[1])
        if pos.shape[1] != neg.shape[1]:
            raise ValueError(
                f"positives have dimension {pos.shape[1]}, negatives {neg.shape[1]}"
            )
        X = np.vstack([pos, neg])
        y = np.concatenate([np.ones(len(pos), np.int64), -np.ones(len(neg), np.int64)])
        return cls(X, y)

    @classmethod
    def from_points(cls, points: Iterable[LabeledPoint]) -> "Dataset":
        points = list(points)
        if not points:
            raise ValueError("no points")
        dims = {len(p.coords) for p in points}
        if len(dims) != 1:
            raise ValueError(f"points have mixed dimensions {sorted(dims)}")
        return cls(np.array([p.coords for p in points]), np.array([p.label for p in points]))

    def points(self) -> Iterator[LabeledPoint]:
        for row, label in zip(self.X, self.y):
            yield LabeledPoint(tuple(float(v) for v in row), int(label))

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def n_pos(self) -> int:
        return self.positives.shape[0]

    @property
    def n_neg(self) -> int:
        return self.negatives.shape[0]

    @property
    def total_pairs(self) -> int:
        return self.n_pos * self.n_neg

    def subset(self, index: ArrayLike) -> "Dataset":
        index = np.asarray(index, dtype=np.int64)
        return Dataset(self.X[index], self.y[index])

    def require_both_classes(self) -> None:
        if self.n_pos < 1 or self.n_neg < 1:
            raise ValueError(
                f"need at least one positive and one negative (got {self.n_pos}, {self.n_neg})"
            )

    def pair_differences(self) -> NDArray[np.float64]:
        """All ``x_i^+ - x_j^-`` as an ``(n_pos * n_neg, d)`` array, row ``i * n_neg + j``."""
        diff = self.positives[:, None, :] - self.negatives[None, :, :]
        return diff.reshape(-1, self.dim)

    def __repr__(self) -> str:
        return f"Dataset(n_pos={self.n_pos}, n_neg={self.n_neg}, dim={self.dim})"


@dataclass(frozen=True, order=True)
class AucValue:
    """Strict AUC held as ``satisfied_pairs / total_pairs``."""

    satisfied_pairs: int
    total_pairs: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "satisfied_pairs", int(self.satisfied_pairs))
        object.__setattr__(self, "total_pairs", int(self.total_pairs))
        if self.total_pairs < 1:
            raise ValueError("total_pairs must be positive")
        if not 0 <= self.satisfied_pairs <= self.total_pairs:
            raise ValueError(
                f"satisfied_pairs {self.satisfied_pairs} outside [0, {self.total_pairs}]"
            )

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.satisfied_pairs, self.total_pairs)

    @property
    def value(self) -> float:
        return self.satisfied_pairs / self.total_pairs

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.satisfied_pairs}/{self.total_pairs}"


def as_direction(weights: ArrayLike, dim: int | None = None) -> NDArray[np.float64]:
    """Validate a weight vector: 1-D, finite, not all zero, optionally of length ``dim``."""
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if dim is not None and w.shape[0] != dim:
        raise ValueError(f"direction has dimension {w.shape[0]}, dataset has {dim}")
    if not np.all(np.isfinite(w)):
        raise ValueError("direction must be finite")
    if not np.any(w != 0.0):
        raise ValueError("direction must have a nonzero component")
    return w


def linear_scores(X: NDArray[np.float64], W: NDArray[np.float64]) -> NDArray[np.float64]:
    """Scores ``W . x`` for every point.

    ``W`` of shape ``(d,)`` gives ``(n,)``; ``(k, d)`` gives ``(k, n)``. The sum
    runs coordinate by coordinate in a fixed order so that single and batched
    evaluation round identically (BLAS kernels do not guarantee this).
    """
    W = np.asarray(W, dtype=np.float64)
    if W.ndim == 1:
        s = X[:, 0] * W[0]
        for c in range(1, X.shape[1]):
            s = s + X[:, c] * W[c]
        return s
    s = W[:, 0, None] * X[None, :, 0]
    for c in range(1, X.shape[1]):
        s = s + W[:, c, None] * X[None, :, c]
    return s


def count_strict_pairs(
    pos_scores: NDArray[np.float64], neg_scores: NDArray[np.float64]
) -> tuple[int, int]:
    """Return ``(strictly_ordered, tied)`` pair counts in O(n log n)."""
    neg_sorted = np.sort(neg_scores)
    below = np.searchsorted(neg_sorted, pos_scores, side="left")
    below_or_equal = np.searchsorted(neg_sorted, pos_scores, side="right")
    return int(below.sum()), int((below_or_equal - below).sum())


def _count_naive(pos_scores: NDArray[np.float64], neg_scores: NDArray[np.float64]) -> int:
    return int(np.count_nonzero(pos_scores[:, None] > neg_scores[None, :]))


def evaluate_auc_direction(
    dataset: Dataset, direction: ArrayLike, *, naive: bool = False
) -> AucValue:
    """Strict AUC of the linear scorer ``direction`` on ``dataset``.

    Parameters
    ----------
    dataset : Dataset
        Needs at least one point of each class.
    direction : array_like
        Weight vector of length ``dataset.dim``, not all zero.
    naive : bool
        Use the O(n_pos * n_neg) double loop instead of sorting. Both paths
        return the same count; the naive one exists to cross-check the other.
    """
    dataset.require_both_classes()
    w = as_direction(direction, dataset.dim)
    sp = linear_scores(dataset.positives, w)
    sn = linear_scores(dataset.negatives, w)
    if naive:
        satisfied = _count_naive(sp, sn)
    else:
        satisfied, _ = count_strict_pairs(sp, sn)
    return AucValue(satisfied, dataset.total_pairs)


def count_satisfied_many(
    dataset: Dataset, directions: ArrayLike, chunk: int = 4096
) -> NDArray[np.int64]:
    """Strict satisfied-pair counts for each row of ``directions``.

    Same scoring arithmetic as :func:`evaluate_auc_direction`, batched.
    Zero rows are allowed here and score every pair as tied.
    """
    dataset.require_both_classes()
    W = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    if W.shape[1] != dataset.dim:
        raise ValueError(f"directions have dimension {W.shape[1]}, dataset has {dataset.dim}")
    out = np.empty(W.shape[0], dtype=np.int64)
    per = max(1, chunk * 64 // max(1, dataset.total_pairs))
    for start in range(0, W.shape[0], per):
        block = W[start : start + per]
        sp = linear_scores(dataset.positives, block)
        sn = linear_scores(dataset.negatives, block)
        out[start : start + per] = np.count_nonzero(
            sp[:, :, None] > sn[:, None, :], axis=(1, 2)
        )
    return out



@dataclass(frozen=True, eq=False)
class OptResult:
    """Outcome of an optimizer run.

    ``auc`` is always recomputed from scratch for ``direction``; solvers may
    record their own bookkeeping in ``diagnostics`` but never report it as
    the AUC.
    """

    auc: AucValue
    direction: NDArray[np.float64]
    events_processed: int = 0
    degenerate_pairs: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def satisfied_pairs(self) -> int:
        return self.auc.satisfied_pairs
