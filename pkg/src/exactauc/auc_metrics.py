"""AUC and ROC curves computed from raw score arrays."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import AucValue, count_strict_pairs

__all__ = ["TiePolicy", "RocCurve", "auc_from_scores", "roc_points"]


class TiePolicy(str, Enum):
    """How a cross-class tie is credited: ``strict`` gives 0, ``half`` gives 1/2."""

    STRICT = "strict"
    HALF = "half"


def _check_scores(values: ArrayLike, name: str) -> NDArray[np.float64]:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains a non-finite score")
    return arr


def auc_from_scores(
    pos_scores: ArrayLike,
    neg_scores: ArrayLike,
    policy: TiePolicy | str = TiePolicy.STRICT,
) -> AucValue | float:
    """AUC of two score samples by sorting, O(n log n).

    The strict policy returns an :class:`AucValue`. The half policy can land
    on odd multiples of ``1 / (2 n_pos n_neg)`` so it returns a plain float.
    """
    policy = TiePolicy(policy)
    sp = _check_scores(pos_scores, "pos_scores")
    sn = _check_scores(neg_scores, "neg_scores")
    above, tied = count_strict_pairs(sp, sn)
    total = sp.size * sn.size
    if policy is TiePolicy.STRICT:
        return AucValue(above, total)
    return (above + 0.5 * tied) / total


@dataclass(frozen=True)
class RocCurve:
    """ROC vertices ordered from (0, 0) to (1, 1)."""

    fpr: NDArray[np.float64]
    tpr: NDArray[np.float64]

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.fpr, self.tpr)]

    def area(self) -> float:
        """Trapezoidal area under the curve."""
        return float(np.sum(np.diff(self.fpr) * (self.tpr[1:] + self.tpr[:-1]) / 2.0))

    def to_csv(self) -> str:
        lines = ["fpr,tpr"]
        lines += [f"{a!r},{b!r}" for a, b in self.points]
        return "\n".join(lines) + "\n"


def roc_points(pos_scores: ArrayLike, neg_scores: ArrayLike) -> RocCurve:
    """ROC curve of a threshold sweep from high to low scores.

    All samples sharing a score enter at once, so a block of cross-class
    ties becomes one diagonal segment. That makes the trapezoidal area equal
    to the half-credit AUC.

    >>> roc_points([1.0], [0.0]).points
    [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    """
    sp = _check_scores(pos_scores, "pos_scores")
    sn = _check_scores(neg_scores, "neg_scores")
    scores = np.concatenate([sp, sn])
    is_pos = np.concatenate([np.ones(sp.size, bool), np.zeros(sn.size, bool)])
    order = np.argsort(-scores, kind="stable")
    scores = scores[order]
    is_pos = is_pos[order]
    # last index of every block of equal scores
    ends = np.flatnonzero(np.append(scores[1:] != scores[:-1], True))
    tp = np.cumsum(is_pos)[ends]
    fp = np.cumsum(~is_pos)[ends]
    tpr = np.concatenate([[0.0], tp / sp.size])
    fpr = np.concatenate([[0.0], fp / sn.size])
    return RocCurve(fpr=fpr, tpr=tpr)
