"""
Embedding outcomes as polytope vertices
=======================================

Four outcomes sit on the corners of the square. A distribution over them maps
to the matching convex combination of corners, and that point is exactly what
minimizes the expected Bregman surrogate loss.
"""

import numpy as np
from scipy.optimize import minimize

from polysurrogate.embedding import embed, make_embedding
from polysurrogate.polytope import build_unit_cube
from polysurrogate.surrogate import InducedLoss, diag_quadratic, expected_gradient, expected_loss

E = make_embedding(build_unit_cube(2))
print(dict(zip(E.labels, E.vertices.tolist())))

p = np.array([0.5, 0.2, 0.2, 0.1])
print("embed(p) =", embed(E, p))

# a non-isotropic generator still has embed(p) as its minimizer
L = InducedLoss(diag_quadratic([1.0, 5.0]), E)
res = minimize(lambda u: expected_loss(L, u, p), [3.0, -2.0], jac=lambda u: expected_gradient(L, u, p), method="BFGS")
print("numerical minimizer =", res.x)
print("gradient at embed(p) =", expected_gradient(L, embed(E, p), p))
