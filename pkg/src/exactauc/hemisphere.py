"""Open-hemisphere instances and their AUC counterparts.

An open-hemisphere instance asks for a direction ``w`` with ``w . s > 0`` for
at least ``m`` of the unit vectors ``s``. Shifting each ``s`` by an anchor
point and adding that anchor as the only negative turns the instance into a
linear AUC problem with exactly the same count for every direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import linprog

from .core import Dataset, as_direction

__all__ = [
    "HemisphereInstance",
    "hemisphere_to_lao",
    "hemisphere_count",
    "verify_feasibility",
    "random_hemisphere_instance",
    "max_hemisphere_exhaustive",
    "read_instance",
    "write_instance",
]


@dataclass(frozen=True, eq=False)
class HemisphereInstance:
    """Unit vectors ``points`` (shape ``(k, d)``) and a target count ``threshold``."""

    points: NDArray[np.float64]
    threshold: int

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.shape[0] == 0 or pts.size == 0:
            raise ValueError("empty hemisphere instance")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            k = int(np.argmax(np.abs(norms - 1.0)))
            raise ValueError(f"vector {k} has norm {norms[k]!r}, expected 1")
        if not 1 <= int(self.threshold) <= pts.shape[0]:
            raise ValueError(f"threshold must be in [1, {pts.shape[0]}], got {self.threshold}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "threshold", int(self.threshold))

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def hemisphere_to_lao(
    instance: HemisphereInstance, anchor: ArrayLike | None = None
) -> tuple[Dataset, int]:
    """Build the AUC dataset with positives ``s_i + anchor`` and one negative ``anchor``.

    The anchor defaults to the origin, where the satisfied-pair count of any
    direction equals its hemisphere count exactly. Returns the dataset and
    the pair threshold ``t = m``.
    """
    if anchor is None:
        anchor = np.zeros(instance.dim)
    a = np.asarray(anchor, dtype=np.float64).reshape(1, -1)
    if a.shape[1] != instance.dim:
        raise ValueError(f"anchor has dimension {a.shape[1]}, instance has {instance.dim}")
    return Dataset.from_classes(instance.points + a, a), instance.threshold


def hemisphere_count(points: ArrayLike, w: ArrayLike) -> int:
    """Number of vectors strictly inside the open hemisphere of ``w``."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    w = as_direction(w, pts.shape[1])
    total = 0
    for s in pts:
        if float(np.dot(s, w)) > 0.0:
            total += 1
    return total


def verify_feasibility(dataset: Dataset, w: ArrayLike, t: int) -> bool:
    """Certificate check: does ``w`` order at least ``t`` pairs strictly?

    Walks the pairs once and stops as soon as the counter reaches ``t``;
    O(n_pos n_neg d) in the worst case.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    w = as_direction(w, dataset.dim)
    if t == 0:
        return True
    sp = dataset.positives @ w
    sn = dataset.negatives @ w
    c = 0
    for a in sp:
        for b in sn:
            if a > b:
                c += 1
                if c >= t:
                    return True
    return False


def random_hemisphere_instance(
    k: int, d: int, rng: np.random.Generator, threshold: int | None = None
) -> HemisphereInstance:
    """``k`` unit vectors uniform on the sphere in R^d."""
    pts = rng.standard_normal((k, d))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    if threshold is None:
        threshold = int(rng.integers(1, k + 1))
    return HemisphereInstance(pts, threshold)


def _strictly_feasible(rows: NDArray[np.float64]) -> bool:
    # w . s >= 1 for all rows has a solution iff w . s > 0 does (scale w)
    d = rows.shape[1]
    res = linprog(
        c=np.zeros(d),
        A_ub=-rows,
        b_ub=-np.ones(rows.shape[0]),
        bounds=[(None, None)] * d,
        method="highs",
    )
    return res.status == 0


def max_hemisphere_exhaustive(points: ArrayLike) -> int:
    """Largest subset of ``points`` lying in a common open hemisphere.

    Checks subsets from largest to smallest with one linear-programming
    feasibility test each. Exponential in the number of points; meant for
    instances of a dozen vectors or fewer.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    k = pts.shape[0]
    if k > 16:
        raise ValueError(f"{k} points is too many for exhaustive search")
    for size in range(k, 0, -1):
        for subset in itertools.combinations(range(k), size):
            if _strictly_feasible(pts[list(subset)]):
                return size
    return 0


def write_instance(path, instance: HemisphereInstance) -> None:
    """CSV with one unit vector per row, then a final ``threshold,<m>`` row."""
    lines = [",".join(f"s{k + 1}" for k in range(instance.dim))]
    lines += [",".join(repr(float(v)) for v in row) for row in instance.points]
    lines.append(f"threshold,{instance.threshold}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_instance(path) -> HemisphereInstance:
    rows: list[list[float]] = []
    threshold = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            if fields[0] == "threshold":
                if len(fields) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'threshold,<m>'")
                threshold = int(fields[1])
                continue
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
    if threshold is None:
        raise ValueError(f"{path}: missing threshold row")
    if not rows:
        raise ValueError(f"{path}: no vectors")
    return HemisphereInstance(np.array(rows), threshold)
