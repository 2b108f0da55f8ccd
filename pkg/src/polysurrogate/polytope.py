"""Named polytopes (cube, permutahedron, cross-polytope) and generic V-polytopes.

Vertex order is part of the contract because outcomes are bound to vertices
by position:

* cube: index ``i`` has coordinate ``k`` equal to ``+1`` iff bit ``k`` of ``i`` is set;
* permutahedron: permutations of the increasing weight vector in
  lexicographic order;
* cross-polytope: vertex ``2i`` is ``e_i`` and vertex ``2i + 1`` is ``-e_i``.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import geometry
from .errors import InputError
from .projection import project_box, project_l1_ball, project_permutahedron


class Kind(enum.Enum):
    CUBE = "cube"
    PERMUTAHEDRON = "permutahedron"
    CROSS = "cross"
    GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    kind: Kind = Kind.GENERIC
    weights: np.ndarray | None = None  # permutahedron generator vector

    def __post_init__(self):
        self.vertices.setflags(write=False)

    @property
    def n(self):
        return self.vertices.shape[0]

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __repr__(self):
        return f"Polytope(kind={self.kind.value}, n={self.n}, dim={self.dim})"

    @cached_property
    def edges(self):
        """Sorted tuple of vertex index pairs ``(i, j)``, ``i < j``, spanning edges."""
        return tuple((i, j) for i in range(self.n) for j in self.neighbors(i) if i < j)

    @cached_property
    def _neighbor_sets(self):
        V = self.vertices
        if self.kind is Kind.CUBE:
            index = {tuple(v): i for i, v in enumerate(V.tolist())}
            out = []
            for v in V.tolist():
                flips = []
                for k in range(self.dim):
                    w = list(v)
                    w[k] = -w[k]
                    flips.append(index[tuple(w)])
                out.append(frozenset(flips))
            return tuple(out)
        if self.kind is Kind.CROSS:
            out = []
            for i in range(self.n):
                antipode = np.flatnonzero(np.all(np.isclose(V, -V[i]), axis=1))
                out.append(frozenset(set(range(self.n)) - {i} - set(antipode.tolist())))
            return tuple(out)
        if self.kind is Kind.PERMUTAHEDRON:
            w = np.sort(self.weights)
            ranks = np.searchsorted(w, V - 1e-12)
            out = []
            for i in range(self.n):
                nb = set()
                for j in range(self.n):
                    moved = np.flatnonzero(ranks[i] != ranks[j])
                    if len(moved) == 2 and abs(ranks[i][moved[0]] - ranks[i][moved[1]]) == 1:
                        nb.add(j)
                out.append(frozenset(nb))
            return tuple(out)
        return lp_neighbor_sets(V)

    def neighbors(self, i):
        if not 0 <= i < self.n:
            raise InputError(f"vertex index {i} out of range for {self.n} vertices")
        return self._neighbor_sets[i]

    def project(self, u, tol=geometry.GAP_TOL):
        """Euclidean projection onto the polytope; returns ``(x, distance)``.

        Closed forms for the named kinds, Wolfe's algorithm otherwise.
        """
        u = geometry.as_point(u, self.dim)
        if self.kind is Kind.CUBE:
            x = project_box(u)
        elif self.kind is Kind.CROSS:
            x = project_l1_ball(u)
        elif self.kind is Kind.PERMUTAHEDRON:
            x = project_permutahedron(u, self.weights)
        else:
            return geometry.project_onto_hull(u, self.vertices, tol)
        return x, float(np.linalg.norm(u - x))

    def to_dict(self):
        return {"kind": self.kind.value, "dim": self.dim, "vertices": self.vertices.tolist()}


def lp_neighbor_sets(V):
    n = len(V)
    nb = [set() for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        if geometry.is_edge(i, j, V):
            nb[i].add(j)
            nb[j].add(i)
    return tuple(frozenset(s) for s in nb)


def build_unit_cube(d):
    if not 1 <= d <= 16:
        raise InputError(f"cube dimension must be in [1, 16], got {d}")
    idx = np.arange(2**d)
    bits = (idx[:, None] >> np.arange(d)[None, :]) & 1
    return Polytope(2.0 * bits - 1.0, Kind.CUBE)


def permutahedron_weights(d):
    """Generator ``(0, 1, ..., d-1) / (beta d)`` with ``beta = (d - 1) / 2``; sums to one."""
    beta = (d - 1) / 2
    return np.arange(d) / (beta * d)


def build_permutahedron(d, weights=None):
    if not 2 <= d <= 6:
        raise InputError(f"permutahedron dimension must be in [2, 6], got {d}")
    w = permutahedron_weights(d) if weights is None else np.sort(np.asarray(weights, dtype=float))
    if w.shape != (d,) or np.any(np.diff(w) <= 0):
        raise InputError("permutahedron weights must be d distinct reals")
    V = np.array(list(itertools.permutations(w)))
    return Polytope(V, Kind.PERMUTAHEDRON, w)


def build_cross_polytope(d):
    if d < 1:
        raise InputError(f"cross-polytope dimension must be >= 1, got {d}")
    V = np.zeros((2 * d, d))
    V[0::2] = np.eye(d)
    V[1::2] = -np.eye(d)
    return Polytope(V, Kind.CROSS)


def redundant_vertex(V):
    """Index of the first vertex lying in the hull of the others, or None."""
    for i in range(len(V)):
        if geometry.hull_membership(V[i], np.delete(V, i, axis=0)).inside:
            return i
    return None


def from_vertices(V):
    """Generic polytope on an explicit vertex list (every point must be extreme)."""
    V = geometry.as_vertex_set(V)
    if V.shape[0] < 2:
        raise InputError("a polytope embedding needs at least two vertices")
    i = redundant_vertex(V)
    if i is not None:
        raise InputError(f"vertex {i} ({V[i].tolist()}) is a convex combination of the others")
    return Polytope(V.copy(), Kind.GENERIC)


def _same_vertex_set(A, B):
    if A.shape != B.shape:
        return False
    return all(np.any(np.all(np.abs(B - a) <= 1e-9, axis=1)) for a in A)


def from_dict(data):
    try:
        kind = Kind(data.get("kind", "generic"))
        V = geometry.as_vertex_set(data["vertices"])
        dim = int(data.get("dim", V.shape[1]))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed polytope description: {exc}") from exc
    if V.shape[1] != dim:
        raise InputError(f"declared dim {dim} does not match vertices of dimension {V.shape[1]}")
    if kind is Kind.GENERIC:
        return from_vertices(V)
    reference = {
        Kind.CUBE: build_unit_cube,
        Kind.PERMUTAHEDRON: build_permutahedron,
        Kind.CROSS: build_cross_polytope,
    }[kind](dim)
    if not _same_vertex_set(V, reference.vertices):
        raise InputError(f"vertices do not form the standard {kind.value} of dimension {dim}")
    return Polytope(V.copy(), kind, reference.weights)


def load_polytope(path):
    with open(path) as fh:
        return from_dict(json.load(fh))


def save_polytope(P, path):
    with open(path, "w") as fh:
        json.dump(P.to_dict(), fh, indent=1)
        fh.write("\n")


def build(name, dim):
    """Polytope from a CLI-style name: ``cube``, ``permutahedron``, ``cross`` or ``file:PATH``."""
    if name.startswith("file:"):
        return load_polytope(name[5:])
    builders = {
        "cube": build_unit_cube,
        "permutahedron": build_permutahedron,
        "cross": build_cross_polytope,
    }
    if name not in builders:
        raise InputError(f"unknown polytope {name!r}")
    if dim is None:
        raise InputError(f"polytope {name!r} needs a dimension")
    return builders[name](dim)
