"""Exact AUC maximization in R^d by recursing onto pair hyperplanes.

Each difference ``u = x_i^+ - x_j^-`` defines the hyperplane ``H(u)`` of
directions that tie that pair. Some optimal cell of the arrangement of all
such hyperplanes has a facet on one of them, so it suffices to solve the
problem restricted to each ``H(u)`` (one dimension lower) and then step off
the hyperplane to the better side. The planar case is the slope sweep.

Internally the recursion works on the difference vectors themselves, held as
a dataset whose negatives are the single origin point: a direction satisfies
the pair ``(i, j)`` exactly when it scores ``x_i^+ - x_j^-`` above zero.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import (
    Dataset,
    OptResult,
    as_direction,
    count_satisfied_many,
    evaluate_auc_direction,
)
from .sweep2d import solve_2d

__all__ = [
    "SubspaceBasis",
    "orthonormal_complement",
    "project_onto_hyperplane",
    "reduce_coordinates",
    "lift_direction",
    "refine_by_perturbation",
    "solve_nd",
    "DEFAULT_MAX_DIM",
]

DEFAULT_MAX_DIM = 4
# reduced difference vectors shorter than this fraction of the original are
# treated as parallel to the hyperplane normal
_PARALLEL_RTOL = 1e-10
_ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of the hyperplane orthogonal to ``normal``.

    ``basis`` has shape ``(d - 1, d)``; row ``k`` is the unit vector ``u_k``.
    """

    normal: NDArray[np.float64]
    basis: NDArray[np.float64]

    def check(self, tol: float = _ORTHO_TOL) -> None:
        gram = self.basis @ self.basis.T
        if not np.allclose(gram, np.eye(self.basis.shape[0]), rtol=0.0, atol=tol):
            raise ValueError("basis vectors are not orthonormal")
        unit = self.normal / np.linalg.norm(self.normal)
        if np.max(np.abs(self.basis @ unit), initial=0.0) > tol:
            raise ValueError("basis vectors are not orthogonal to the normal")


def _gram_schmidt(unit: NDArray[np.float64]) -> NDArray[np.float64]:
    d = unit.shape[0]
    vecs = [unit]
    for e in np.eye(d):
        v = e.copy()
        for q in vecs:
            v -= (v @ q) * q
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            vecs.append(v / norm)
        if len(vecs) == d:
            break
    return np.array(vecs[1:])


def orthonormal_complement(normal: ArrayLike) -> SubspaceBasis:
    """Basis of ``normal``'s orthogonal complement from a Householder reflection.

    The reflection that sends ``e_k`` (``k`` the largest component of the
    normal) onto the normal's line maps the other standard vectors onto an
    orthonormal basis of the complement. Falls back to Gram-Schmidt if the
    result fails the orthonormality check.
    """
    n = as_direction(normal)
    unit = n / np.linalg.norm(n)
    d = unit.shape[0]
    k = int(np.argmax(np.abs(unit)))
    v = unit.copy()
    v[k] += 1.0 if unit[k] >= 0 else -1.0
    H = np.eye(d) - 2.0 * np.outer(v, v) / (v @ v)
    basis = np.delete(H, k, axis=0)
    out = SubspaceBasis(normal=n, basis=basis)
    try:
        out.check()
    except ValueError:
        out = SubspaceBasis(normal=n, basis=_gram_schmidt(unit))
        out.check()
    return out


def project_onto_hyperplane(dataset: Dataset, normal: ArrayLike) -> Dataset:
    """Orthogonal projection ``x - (x . u / |u|^2) u`` of every point; labels kept."""
    u = as_direction(normal, dataset.dim)
    X = dataset.X
    coef = (X @ u) / (u @ u)
    return Dataset(X - coef[:, None] * u[None, :], dataset.y)


def reduce_coordinates(
    projected: Dataset, basis: SubspaceBasis, tol: float = 1e-9, check: bool = True
) -> Dataset:
    """Express in-plane points in the ``d - 1`` coordinates of ``basis``.

    A point counts as on the hyperplane when ``|x . u| <= tol * s * |u|``
    with ``s`` the largest point norm in the dataset.
    """
    X = projected.X
    u = basis.normal
    off = np.abs(X @ u)
    scale = np.linalg.norm(X, axis=1).max(initial=0.0)
    limit = tol * scale * np.linalg.norm(u)
    if check and np.any(off > limit):
        row = int(np.argmax(off - limit))
        raise ValueError(f"point {row} is not on the hyperplane (|x . u| = {off[row]:.3g})")
    return Dataset(X @ basis.basis.T, projected.y)


def lift_direction(basis: SubspaceBasis, low_dir: ArrayLike) -> NDArray[np.float64]:
    """Map a direction in reduced coordinates back to R^d (``sum_k w'_k u_k``)."""
    w = as_direction(low_dir, basis.basis.shape[0])
    return w @ basis.basis


def _safe_step(dataset: Dataset, w: NDArray[np.float64], unit: NDArray[np.float64]) -> float:
    """Step along ``unit`` below which no pair off the normal's line changes sign.

    Pairs whose difference is parallel to the normal are the ones the
    perturbation is meant to untie, so they do not limit the step.
    """
    diff = dataset.pair_differences()
    a = diff @ w
    b = diff @ unit
    norm = np.linalg.norm(diff, axis=1)
    parallel = np.linalg.norm(diff - b[:, None] * unit[None, :], axis=1) <= _PARALLEL_RTOL * norm
    moving = (a != 0.0) & (b != 0.0) & ~parallel
    if not np.any(moving):
        return np.inf
    return float(np.min(np.abs(a[moving]) / np.abs(b[moving])))


def refine_by_perturbation(
    dataset: Dataset,
    candidate: ArrayLike,
    normal: ArrayLike,
    max_halvings: int = 40,
) -> NDArray[np.float64]:
    """Nudge ``candidate`` off the hyperplane of ``normal`` if that unties pairs.

    Compares ``candidate`` and ``candidate +- delta * normal/|normal|``.
    ``delta`` starts at ``|candidate| * 2**-10``, is halved until it is below
    the distance at which a strictly ordered pair would flip, and then keeps
    halving until the best count stops changing (at most ``max_halvings``
    halvings in total). Returns the best direction seen, never worse than
    ``candidate``; on a tie the perturbed direction is preferred.
    """
    w = as_direction(candidate, dataset.dim)
    u = as_direction(normal, dataset.dim)
    unit = u / np.linalg.norm(u)
    delta = float(np.linalg.norm(w)) * 2.0**-10
    safe = _safe_step(dataset, w, unit)

    best_w = w
    best = int(count_satisfied_many(dataset, w[None, :])[0])
    moved = False
    previous = None
    for _ in range(max_halvings + 1):
        if delta < safe:
            trial = np.array([w + delta * unit, w - delta * unit])
            counts = count_satisfied_many(dataset, trial)
            k = int(np.argmax(counts))
            # an off-plane direction wins ties with the candidate: its margins
            # are real, while the candidate's ties may score as rounding noise
            if counts[k] > best or (counts[k] == best and not moved):
                best, best_w, moved = int(counts[k]), trial[k], True
            level = int(counts.max())
            if previous is not None and level == previous:
                break
            previous = level
        delta /= 2.0
        if delta == 0.0:
            break
    return best_w


def _difference_dataset(diff: NDArray[np.float64]) -> Dataset:
    d = diff.shape[1]
    return Dataset.from_classes(diff, np.zeros((1, d)))


def _candidate_normals(diff: NDArray[np.float64]) -> tuple[NDArray[np.float64], int, int]:
    """Nonzero differences, one per distinct hyperplane, in first-seen order."""
    nonzero = np.any(diff != 0.0, axis=1)
    degenerate = int(np.count_nonzero(~nonzero))
    rows = diff[nonzero]
    if rows.shape[0] == 0:
        return rows, degenerate, 0
    unit = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    # canonical sign: first component of magnitude > 0 made positive
    lead = np.argmax(np.abs(unit) > 1e-12, axis=1)
    unit = unit * np.sign(unit[np.arange(len(unit)), lead])[:, None]
    keys = np.round(unit, 12)
    _, first = np.unique(keys, axis=0, return_index=True)
    first = np.sort(first)
    return rows[first], degenerate, int(rows.shape[0] - first.size)


def _solve_diffs(diff: NDArray[np.float64], threads: int) -> tuple[int, NDArray[np.float64], dict]:
    """Max number of rows scored strictly positive, and a direction achieving it."""
    d = diff.shape[1]
    data = _difference_dataset(diff)
    if d == 2:
        res = solve_2d(data)
        return res.satisfied_pairs, res.direction, {"subproblems": 1}

    normals, degenerate, duplicates = _candidate_normals(diff)
    stats = {"subproblems": 0, "normals": int(normals.shape[0]),
             "degenerate_normals": degenerate, "duplicate_normals": duplicates}
    if normals.shape[0] == 0:
        w = np.eye(d)[0]
        return int(count_satisfied_many(data, w[None, :])[0]), w, stats

    row_norm = np.linalg.norm(diff, axis=1)

    def subproblem(u: NDArray[np.float64]) -> tuple[int, NDArray[np.float64], int]:
        basis = orthonormal_complement(u)
        # reduce the projected differences; rows parallel to u collapse to 0
        projected = project_onto_hyperplane(data, u)
        reduced = reduce_coordinates(projected, basis, check=False).positives.copy()
        parallel = np.linalg.norm(reduced, axis=1) <= _PARALLEL_RTOL * row_norm
        reduced[parallel] = 0.0
        _, low, sub = _solve_diffs(reduced, 1)
        lifted = lift_direction(basis, low)
        refined = refine_by_perturbation(data, lifted, u)
        count = int(count_satisfied_many(data, refined[None, :])[0])
        return count, refined, sub["subproblems"]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(subproblem, normals))
    else:
        results = [subproblem(u) for u in normals]

    best = max(range(len(results)), key=lambda k: (results[k][0], -k))
    stats["subproblems"] = 1 + sum(r[2] for r in results)
    return results[best][0], results[best][1], stats


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("EXACTAUC_THREADS", "1")))
    except ValueError:
        return 1


def solve_nd(
    dataset: Dataset,
    d: int | None = None,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
    threads: int | None = None,
) -> OptResult:
    """Globally optimal strict AUC over all directions in R^d.

    Cost grows like ``(n_pos n_neg)^(d-1) log(n_pos n_neg)``, so dimensions
    above ``max_dim`` are refused rather than attempted.

    Parameters
    ----------
    dataset : Dataset
    d : int, optional
        Expected dimension; must equal ``dataset.dim`` when given.
    max_dim : int
        Largest dimension accepted.
    threads : int, optional
        Workers for the top-level loop over hyperplanes. The result does not
        depend on it. Defaults to ``$EXACTAUC_THREADS`` or 1.
    """
    t0 = time.perf_counter()
    if d is None:
        d = dataset.dim
    if d != dataset.dim:
        raise ValueError(f"requested d={d} but the dataset has dimension {dataset.dim}")
    if d < 2:
        raise ValueError("solve_nd needs d >= 2")
    if d > max_dim:
        raise ValueError(f"d={d} exceeds the supported maximum of {max_dim}")
    dataset.require_both_classes()
    if d == 2:
        return solve_2d(dataset)

    threads = default_threads() if threads is None else max(1, int(threads))
    diff = dataset.pair_differences()
    tracked, w, stats = _solve_diffs(diff, threads)
    auc = evaluate_auc_direction(dataset, w)
    return OptResult(
        auc=auc,
        direction=w,
        events_processed=stats.get("subproblems", 0),
        degenerate_pairs=stats.get("degenerate_normals", 0),
        diagnostics={**stats, "tracked_satisfied": tracked,
                     "runtime_s": time.perf_counter() - t0},
    )
