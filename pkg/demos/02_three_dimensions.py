"""Recursion into hyperplanes for three-dimensional data.

In 3D the optimum lies in a cone whose boundary contains a pair-difference
hyperplane. The solver projects onto each such plane, solves the 2D problem
there and nudges the answer off the plane to untie the defining pairs.
"""

import numpy as np

from exactauc.core import Dataset
from exactauc.oracles import sample_directions_oracle, vertex_oracle_3d
from exactauc.solver_nd import orthonormal_complement, project_onto_hyperplane, solve_nd
from exactauc.sweep2d import solve_2d

# XOR lifted so that the third coordinate separates the classes.
lifted = Dataset.from_classes([[0, 0, 1], [1, 1, 1]], [[0, 1, 0], [1, 0, 0]])
shadow = Dataset(lifted.X[:, :2], lifted.y)
print("lifted XOR:", solve_nd(lifted).auc, "| its 2D shadow:", solve_2d(shadow).auc)

# Building blocks: project onto the plane orthogonal to u, pick a basis.
u = np.array([1.0, 1.0, 1.0])
proj = project_onto_hyperplane(Dataset(np.array([[1.0, 2.0, 3.0]]), [1]), u)
print("projection of (1,2,3) along (1,1,1):", proj.X[0])
basis = orthonormal_complement(u)
print("largest |basis . u|:", float(np.abs(basis.basis @ u).max()))

# Random instance against the two reference oracles.
rng = np.random.default_rng(3)
ds = Dataset.from_classes(rng.standard_normal((7, 3)), rng.standard_normal((6, 3)))
exact = solve_nd(ds)
print("\nexact:", exact.auc, f"({exact.diagnostics['normals']} candidate normals)")
print("vertex oracle:", vertex_oracle_3d(ds).auc)
print("20000 random directions:", sample_directions_oracle(ds, 20000, 0).auc)
