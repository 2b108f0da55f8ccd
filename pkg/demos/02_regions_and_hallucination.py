"""
Where the MAP link goes wrong
=============================

Every point of the square is linked to its nearest corner. Some points are
safe (every distribution behind them has that corner as its mode), some are
inconsistent, and at the origin the link can even name an outcome that has
probability zero.
"""

from polysurrogate.embedding import make_embedding
from polysurrogate.io import region_svg
from polysurrogate.polytope import build_permutahedron, build_unit_cube
from polysurrogate.regions import classify_point, hallucination_witness, make_grid, map_regions, vertex_calibration_radius

E = make_embedding(build_unit_cube(2))
for u in [(0.9, 0.8), (0.2, 0.1), (0.5, 0.25), (0.0, 0.0)]:
    c = classify_point(E, u)
    print(u, c.category.value, "linked to", E.labels[c.linked_outcome])

w = hallucination_witness(E)
print("witness point", w.point)
for label, p in w.witnesses.items():
    print(f"  {label} can be hallucinated from p = {p.round(3)}")

print("strict radius around each corner:", [vertex_calibration_radius(E, y) for y in range(E.n)])

table = map_regions(E, make_grid(E.polytope, 61))
print({c.value: k for c, k in table.counts().items()})
with open("cube_regions.svg", "w") as fh:
    fh.write(region_svg(table))

# the hexagon shows all three kinds of region
H = make_embedding(build_permutahedron(3))
table = map_regions(H, make_grid(H.polytope, 41))
print("permutahedron:", {c.value: k for c, k in table.counts().items()})
