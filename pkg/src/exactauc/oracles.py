"""Reference optimizers used to certify the exact solvers.

None of these reuse the sweep or the recursive projection. They only share
the strict AUC evaluation from :mod:`exactauc.core`, which is itself checked
against a naive double loop.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np

from .core import Dataset, OptResult, count_satisfied_many, evaluate_auc_direction

__all__ = ["brute_force_2d", "sample_directions_oracle", "vertex_oracle_3d"]


def _best_of(dataset: Dataset, candidates: np.ndarray, t0: float, **diag) -> OptResult:
    counts = count_satisfied_many(dataset, candidates)
    k = int(np.argmax(counts))
    w = candidates[k].copy()
    return OptResult(
        auc=evaluate_auc_direction(dataset, w),
        direction=w,
        events_processed=int(candidates.shape[0]),
        diagnostics={"candidates": int(candidates.shape[0]),
                     "runtime_s": time.perf_counter() - t0, **diag},
    )


def brute_force_2d(dataset: Dataset) -> OptResult:
    """Exhaustive planar optimum, O(n^3 log n) in spirit.

    Collects every cross-class critical slope ``-(dy)/(dx)`` as an exact
    rational, then scores ``[m, 1]`` and ``[-m, -1]`` at the midpoint of each
    gap between consecutive distinct slopes, one step beyond both ends, and
    along the four axis directions. Each candidate is scored from scratch.
    """
    t0 = time.perf_counter()
    if dataset.dim != 2:
        raise ValueError(f"expected a 2-D dataset, got dimension {dataset.dim}")
    dataset.require_both_classes()
    slopes = set()
    for p in dataset.positives:
        for q in dataset.negatives:
            dx = Fraction(float(p[0])) - Fraction(float(q[0]))
            if dx != 0:
                dy = Fraction(float(p[1])) - Fraction(float(q[1]))
                slopes.add(-dy / dx)
    ordered = sorted(slopes)
    probes: list[float] = []
    if ordered:
        probes.append(float(ordered[0] - 1))
        probes += [float((a + b) / 2) for a, b in zip(ordered[:-1], ordered[1:])]
        probes.append(float(ordered[-1] + 1))
    m = np.asarray(probes, dtype=np.float64)
    ones = np.ones_like(m)
    axes = np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]])
    candidates = np.vstack(
        [np.column_stack([m, ones]), np.column_stack([-m, -ones]), axes]
    )
    return _best_of(dataset, candidates, t0, distinct_slopes=len(ordered))


def sample_directions_oracle(dataset: Dataset, num_samples: int, seed: int) -> OptResult:
    """Best of ``num_samples`` directions drawn uniformly from the unit sphere.

    A lower bound on the optimum in any dimension. Uses numpy's PCG64
    generator seeded with ``seed``.
    """
    t0 = time.perf_counter()
    if num_samples < 1:
        raise ValueError("num_samples must be at least 1")
    dataset.require_both_classes()
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((num_samples, dataset.dim))
    norms = np.linalg.norm(W, axis=1)
    W = W[norms > 0] / norms[norms > 0, None]
    return _best_of(dataset, W, t0, seed=seed)


def _unique_lines(vectors: np.ndarray) -> np.ndarray:
    """Drop zero rows and rows parallel to an earlier row (either sign)."""
    keep: list[np.ndarray] = []
    for v in vectors:
        if not np.any(v):
            continue
        if any(np.linalg.norm(np.cross(v, u)) <= 1e-12 * np.linalg.norm(v) * np.linalg.norm(u)
               for u in keep):
            continue
        keep.append(v)
    return np.array(keep).reshape(-1, 3)


def vertex_oracle_3d(dataset: Dataset, max_pairs: int = 64) -> OptResult:
    """Exhaustive optimum in R^3 by probing around every arrangement edge.

    Every hyperplane ``{w : w . (x_i^+ - x_j^-) = 0}`` passes through the
    origin. Any two non-parallel ones meet in a line spanned by
    ``w0 = u_a x u_b``. Around that line the directions
    ``+-w0 + delta * (alpha * v_a + beta * v_b)``, with ``v_a, v_b`` the dual
    basis of ``u_a, u_b`` in their span, land in every sector bounded by two
    consecutive hyperplanes through the line. Every open cell of the
    arrangement touches at least one such line (or is a half-space when all
    differences are parallel, covered by probing ``+-u`` and their normal
    frames), so the maximum over all probes is the optimum.
    """
    t0 = time.perf_counter()
    if dataset.dim != 3:
        raise ValueError(f"expected a 3-D dataset, got dimension {dataset.dim}")
    dataset.require_both_classes()
    if dataset.total_pairs > max_pairs:
        raise ValueError(
            f"{dataset.total_pairs} pairs exceeds the oracle guard of {max_pairs}"
        )
    lines = _unique_lines(dataset.pair_differences())
    probes: list[np.ndarray] = [np.eye(3), -np.eye(3)]
    for u in lines:
        # half-spaces and a frame around each single hyperplane
        e = np.eye(3)[np.argmin(np.abs(u))]
        a = np.cross(u, e)
        b = np.cross(u, a)
        for s in (u, -u):
            probes.append(np.array([s, s + a * 1e-3, s - a * 1e-3, s + b * 1e-3, s - b * 1e-3]))
    signs = np.array([(al, be) for al in (-1, 0, 1) for be in (-1, 0, 1)], dtype=np.float64)
    for ua, ub in itertools.combinations(lines, 2):
        w0 = np.cross(ua, ub)
        gram = np.array([[ua @ ua, ua @ ub], [ua @ ub, ub @ ub]])
        dual = np.linalg.solve(gram, np.vstack([ua, ub]))  # rows v with v . u = e_k
        scale = np.linalg.norm(w0) / max(np.linalg.norm(dual, axis=1).max(), 1e-300)
        offsets = signs @ dual
        for level in (2.0**-10, 2.0**-20, 2.0**-30):
            for base in (w0, -w0):
                probes.append(base + level * scale * offsets)
    candidates = np.vstack(probes)
    candidates = candidates[np.any(candidates != 0.0, axis=1)]
    return _best_of(dataset, candidates, t0, lines=int(lines.shape[0]))
