"""Open hemispheres as AUC problems.

Counting unit vectors in an open hemisphere is the same as counting ordered
pairs in a dataset whose positives are the vectors and whose single
negative sits at the origin. The exhaustive hemisphere search (one linear
program per subset) agrees with the exact AUC solver.
"""

import numpy as np

from exactauc.core import evaluate_auc_direction
from exactauc.hemisphere import (
    HemisphereInstance,
    hemisphere_count,
    hemisphere_to_lao,
    max_hemisphere_exhaustive,
    random_hemisphere_instance,
    verify_feasibility,
)
from exactauc.solver_nd import solve_nd

K = HemisphereInstance(np.array([[1.0, 0.0], [0.0, 1.0]]), threshold=2)
ds, t = hemisphere_to_lao(K)
print("positives", ds.positives.tolist(), "negative", ds.negatives.tolist(), "t =", t)
print("w=(1,1) feasible:", verify_feasibility(ds, [1, 1], t))
print("w=(1,-1) feasible:", verify_feasibility(ds, [1, -1], t))

rng = np.random.default_rng(11)
inst = random_hemisphere_instance(9, 3, rng)
ds, _ = hemisphere_to_lao(inst)
w = rng.standard_normal(3)
print("\nrandom w: hemisphere count", hemisphere_count(inst.points, w),
      "| ordered pairs", evaluate_auc_direction(ds, w).satisfied_pairs)
print("largest hemisphere (exhaustive):", max_hemisphere_exhaustive(inst.points))
print("exact AUC solver:", solve_nd(ds).satisfied_pairs)
