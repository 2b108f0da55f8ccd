"""Classification of polytope points into calibration regions.

A point ``u`` of the polytope is linked to ``y* = map_link(u)``; every
distribution in its fiber ``{p : embed(p) = u}`` is a possible truth.

* hallucination: some fiber distribution puts zero mass on ``y*``;
* inconsistent: some fiber distribution prefers another outcome;
* boundary: some fiber distribution ties ``y*`` with another outcome;
* strict: ``y*`` is the unique mode of every fiber distribution.

Categories are checked in that order (worst first).
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import lp
from .embedding import Fiber
from .errors import InputError, SolverError
from .links import map_link

GAP_TOL = 1e-7
ZERO_MASS_TOL = 1e-9


class Category(enum.Enum):
    STRICT = "strict"
    INCONSISTENT = "inconsistent"
    HALLUCINATION = "hallucination"
    BOUNDARY = "boundary"


class RegionClass(NamedTuple):
    category: Category
    linked_outcome: int
    gaps: dict  # z -> max over the fiber of p_z - p_linked


def classify_point(E, u, tol=GAP_TOL):
    fiber = Fiber(E, u)  # raises InputError outside the hull
    y = map_link(E, u).outcome
    gaps = {z: fiber.max_gap(z, y).value for z in range(E.n) if z != y}
    min_mass, _ = fiber.min_weight(y)
    worst = max(gaps.values())
    if min_mass <= ZERO_MASS_TOL:
        category = Category.HALLUCINATION
    elif worst > tol:
        category = Category.INCONSISTENT
    elif worst >= -tol:
        category = Category.BOUNDARY
    else:
        category = Category.STRICT
    return RegionClass(category, y, gaps)


class HallucinationWitness(NamedTuple):
    point: np.ndarray
    witnesses: dict  # label -> distribution with zero mass on that label


def hallucination_witness(E):
    """A point of the polytope every outcome can be hallucinated at.

    Solves one LP over distributions ``p^y`` (one per outcome, ``p^y_y = 0``)
    that all embed to the same point.
    """
    n, d = E.n, E.dim
    if not n - 1 > d:
        raise InputError(f"need n - 1 > d, got n={n}, d={d}")
    V = E.vertices
    blocks = [[k for k in range(n) if k != y] for y in range(n)]
    width = n - 1
    A = np.zeros((n + (n - 1) * d, n * width))
    b = np.zeros(A.shape[0])
    for y in range(n):
        A[y, y * width : (y + 1) * width] = 1.0
        b[y] = 1.0
    for y in range(1, n):
        rows = slice(n + (y - 1) * d, n + y * d)
        A[rows, y * width : (y + 1) * width] = V[blocks[y]].T
        A[rows, 0:width] = -V[blocks[0]].T
    tableau, infeasibility = lp.phase_one(A, b)
    if tableau is None:
        raise SolverError(f"no common hallucination point found (infeasibility {infeasibility:.3g})")
    x = tableau.x
    witnesses = {}
    for y in range(n):
        p = np.zeros(n)
        p[blocks[y]] = x[y * width : (y + 1) * width]
        witnesses[E.labels[y]] = p / p.sum()
    point = witnesses[E.labels[0]] @ V
    return HallucinationWitness(point, witnesses)


def _in_polytope(P, u, tol=1e-9):
    return P.project(u)[1] <= tol


def _cone_directions(E, y, divisions):
    """Unit directions in the tangent cone at ``v_y``, on a simplex grid over edge generators."""
    v = E.vertices[y]
    gens = np.array([E.vertices[k] - v for k in sorted(E.polytope.neighbors(y))])
    m = len(gens)
    dirs = []
    for combo in itertools.product(range(divisions + 1), repeat=m):
        if sum(combo) != divisions:
            continue
        g = np.asarray(combo, dtype=float) @ gens
        dirs.append(g / np.linalg.norm(g))
    return np.unique(np.round(dirs, 12), axis=0)


def vertex_calibration_radius(E, y, resolution=1e-2, tol=GAP_TOL, divisions=None):
    """Lower-bound estimate of the radius of a strict ball around ``v_y``.

    Points ``v_y + k * resolution * d`` are tested for directions ``d`` on a
    grid of the vertex's tangent cone; the result is the largest radius
    ``k * resolution`` (found by bisection over ``k``) such that every tested
    point of the ball inside the polytope classifies strict with link ``y``.
    """
    if resolution <= 0:
        raise InputError("resolution must be positive")
    y = E.index(y)
    v = E.vertices[y]
    others = np.delete(E.vertices, y, axis=0)
    r_max = np.linalg.norm(others - v, axis=1).min() / 2
    k_max = int(math.floor(r_max / resolution + 1e-9))
    if divisions is None:
        divisions = 4 if len(E.polytope.neighbors(y)) <= 3 else 2
    dirs = _cone_directions(E, y, divisions)
    shells = {}

    def shell_ok(k):
        if k not in shells:
            ok = True
            for direction in dirs:
                u = v + k * resolution * direction
                if not _in_polytope(E.polytope, u):
                    continue
                c = classify_point(E, u, tol)
                if c.category is not Category.STRICT or c.linked_outcome != y:
                    ok = False
                    break
            shells[k] = ok
        return shells[k]

    def ball_ok(k):
        return all(shell_ok(j) for j in range(1, k + 1))

    lo, hi = 0, k_max
    if ball_ok(hi):
        return hi * resolution
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ball_ok(mid):
            lo = mid
        else:
            hi = mid
    return lo * resolution


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Regular grid over the affine hull of a polytope.

    ``origin + params @ axes`` gives ambient coordinates; ``shape`` is the
    number of points along each in-hull axis.
    """

    origin: np.ndarray
    axes: np.ndarray  # (k, d) orthonormal rows, or the identity for full-dimensional grids
    lower: np.ndarray
    upper: np.ndarray
    shape: tuple

    @property
    def params(self):
        ticks = [np.linspace(lo, hi, s) for lo, hi, s in zip(self.lower, self.upper, self.shape)]
        mesh = np.meshgrid(*ticks, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @property
    def index(self):
        mesh = np.meshgrid(*[np.arange(s) for s in self.shape], indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @property
    def points(self):
        return self.origin + self.params @ self.axes


def make_grid(P, size):
    """Grid of ``size`` points per axis covering the polytope.

    Full-dimensional polytopes get an axis-aligned grid over their bounding
    box; lower-dimensional ones (the permutahedron lives in the plane
    ``sum(u) = 1``) get a grid over orthonormal in-plane axes centred at the
    vertex centroid.
    """
    V = P.vertices
    center = V.mean(axis=0)
    _, s, vt = np.linalg.svd(V - center)
    rank = int(np.sum(s > 1e-9 * max(1.0, s.max())))
    if rank == P.dim:
        origin, axes = np.zeros(P.dim), np.eye(P.dim)
    else:
        origin, axes = center, vt[:rank]
    coords = (V - origin) @ axes.T
    if rank not in (2, 3):
        raise InputError(f"region maps need a 2- or 3-dimensional polytope, got dimension {rank}")
    return GridSpec(origin, axes, coords.min(axis=0), coords.max(axis=0), (size,) * rank)


@dataclass(frozen=True, eq=False)
class RegionTable:
    labels: tuple
    points: np.ndarray  # (N, d) ambient coordinates of grid points inside the polytope
    grid_index: np.ndarray  # (N, k)
    categories: tuple
    outcomes: tuple
    grid: GridSpec

    def rows(self):
        for x, c, o in zip(self.points, self.categories, self.outcomes):
            yield (*x.tolist(), c.value, self.labels[o])

    def counts(self):
        out = {c: 0 for c in Category}
        for c in self.categories:
            out[c] += 1
        return out


def _classify_chunk(args):
    E, points, tol = args
    return [classify_point(E, u, tol)[:2] for u in points]


def map_regions(E, grid, tol=GAP_TOL, workers=None):
    """Classify every grid point inside the polytope; row order follows the grid."""
    if E.dim not in (2, 3):
        raise InputError(f"region maps support d in {{2, 3}}, got {E.dim}")
    points = grid.points
    index = grid.index
    inside = np.array([_in_polytope(E.polytope, u) for u in points])
    points, index = points[inside], index[inside]
    if workers and workers > 1 and len(points) > 1:
        chunks = np.array_split(points, workers * 4)
        with ProcessPoolExecutor(workers) as pool:
            results = [r for part in pool.map(_classify_chunk, [(E, c, tol) for c in chunks]) for r in part]
    else:
        results = _classify_chunk((E, points, tol))
    return RegionTable(
        E.labels,
        points,
        index,
        tuple(r[0] for r in results),
        tuple(r[1] for r in results),
        grid,
    )
