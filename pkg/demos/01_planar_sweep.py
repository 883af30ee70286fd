"""Exact AUC maximization in the plane.

Walks through the XOR instance, where every direction orders exactly half of
the pairs, then a random instance where the sweep's incremental counts can be
checked against from-scratch evaluation cell by cell.
"""

import numpy as np

from exactauc.core import Dataset, evaluate_auc_direction
from exactauc.oracles import brute_force_2d
from exactauc.sweep2d import enumerate_slope_events, solve_2d, sweep_trace

# XOR: positives on one diagonal, negatives on the other.
xor = Dataset.from_classes([[0, 0], [1, 1]], [[0, 1], [1, 0]])
res = solve_2d(xor)
print("XOR optimum:", res.auc, "=", res.auc.value, "at w =", res.direction)

# Two of the four pairs have vertical differences; their order never changes
# under w = [m, 1], so only the two remaining pairs create slope events.
for group in enumerate_slope_events(xor):
    print("  slope", group[0].exact_slope(), "shared by", len(group), "pair(s)")

# A random instance: the sweep keeps a running count between critical slopes.
rng = np.random.default_rng(7)
ds = Dataset.from_classes(rng.standard_normal((6, 2)), rng.standard_normal((5, 2)))
trace = sweep_trace(ds)
print(f"\n{trace.events} events in {trace.group_slopes.size} slope groups")
print("initial count", trace.initial_count, "at slope", round(trace.initial_slope, 3))
for m, c in list(zip(trace.mid_slopes, trace.counts))[:8]:
    scratch = evaluate_auc_direction(ds, [m, 1.0]).satisfied_pairs
    print(f"  cell at m={m:+.3f}: running {c:2d}, from scratch {scratch:2d}")

best = solve_2d(ds)
print("\nsweep optimum", best.auc, "| brute force", brute_force_2d(ds).auc)
