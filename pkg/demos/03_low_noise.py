"""
Calibration under low noise
===========================

If the most likely outcome always has probability at least 1 - alpha, the
embedded distributions live in small copies of the polytope around each
vertex. While those copies stay apart, linking to the nearest copy recovers
the mode.
"""

import numpy as np

from polysurrogate.embedding import embed, make_embedding, mode, sample_low_noise
from polysurrogate.links import alpha_threshold, low_noise_link, pairwise_disjointness, scaled_family
from polysurrogate.polytope import build_permutahedron, build_unit_cube

for name, P in [("square", build_unit_cube(2)), ("cube", build_unit_cube(3)), ("hexagon", build_permutahedron(3))]:
    E = make_embedding(P)
    print(name, "largest disjoint alpha ~", round(alpha_threshold(E, tol=1e-4), 4))

E = make_embedding(build_unit_cube(2))
for alpha in (0.25, 0.45, 0.5, 0.6):
    dist, pair = pairwise_disjointness(scaled_family(E, alpha))
    print(f"alpha={alpha}: closest copies {pair} at distance {dist:.3f}")

rng = np.random.default_rng(0)
F = scaled_family(E, 0.45)
hits = 0
for _ in range(2000):
    y = int(rng.integers(4))
    p = sample_low_noise(4, 0.45, y, rng)
    hits += low_noise_link(F, embed(E, p)).outcome in mode(p)
print("correct links at alpha=0.45:", hits, "/ 2000")
