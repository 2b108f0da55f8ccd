"""Outcome embeddings: distributions, the linear map to the polytope, fibers.

Distributions are plain 1-d float arrays on the probability simplex. An
:class:`Embedding` binds outcome label ``labels[i]`` to vertex ``i`` of its
polytope, and all numeric work uses those positions.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import geometry, lp
from .errors import InputError
from .polytope import Polytope

SUM_TOL = 1e-12


def default_labels(n):
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"y{i}" for i in range(1, n + 1))


@dataclass(frozen=True, eq=False)
class Embedding:
    polytope: Polytope
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.polytope.n:
            raise InputError(f"{len(self.labels)} labels for {self.polytope.n} vertices")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("outcome labels must be distinct")

    @property
    def n(self):
        return self.polytope.n

    @property
    def dim(self):
        return self.polytope.dim

    @property
    def vertices(self):
        return self.polytope.vertices

    def index(self, outcome):
        """Position of an outcome given by label or integer index."""
        if isinstance(outcome, (int, np.integer)) and not isinstance(outcome, bool):
            if not 0 <= outcome < self.n:
                raise InputError(f"outcome index {outcome} out of range")
            return int(outcome)
        try:
            return self.labels.index(outcome)
        except ValueError:
            raise InputError(f"unknown outcome {outcome!r}") from None

    def vertex(self, outcome):
        return self.polytope.vertices[self.index(outcome)]


def make_embedding(P, labels=None):
    labels = default_labels(P.n) if labels is None else tuple(str(s) for s in labels)
    return Embedding(P, labels)


def check_distribution(p, n=None):
    p = np.asarray(p, dtype=float).ravel()
    if n is not None and p.shape[0] != n:
        raise InputError(f"distribution has {p.shape[0]} entries, expected {n}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InputError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > SUM_TOL * max(1, len(p)):
        raise InputError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def embed(E, p):
    """``sum_i p_i v_i``."""
    p = check_distribution(p, E.n)
    return p @ E.vertices


def mode(p, tau=1e-9):
    """Indices whose probability is within ``tau`` of the maximum."""
    p = np.asarray(p, dtype=float)
    return frozenset(np.flatnonzero(p >= p.max() - tau).tolist())


def in_low_noise(p, alpha):
    if not 0 <= alpha <= 1:
        raise InputError(f"alpha must be in [0, 1], got {alpha}")
    return bool(np.max(p) >= 1 - alpha)


class PreimageBound(NamedTuple):
    target: tuple  # (z, y) outcome indices
    value: float  # max of p_z - p_y over the fiber
    witness: np.ndarray


class Fiber:
    """The set ``{p in simplex : embed(p) = u}`` with a reusable feasible basis."""

    def __init__(self, E, u, tol=geometry.LP_TOL):
        self.embedding = E
        self.u = geometry.as_point(u, E.dim)
        A = np.vstack([E.vertices.T, np.ones(E.n)])
        b = np.append(self.u, 1.0)
        self._tableau, infeasibility = lp.phase_one(A, b, tol)
        if self._tableau is None:
            raise InputError(
                f"point {self.u.tolist()} lies outside the polytope (infeasibility {infeasibility:.3g})"
            )

    def _optimize(self, c):
        res = self._tableau.minimize(c)
        x = res.x / res.x.sum()
        return res.fun, x

    def max_gap(self, z, y):
        """Maximize ``p_z - p_y`` over the fiber."""
        E = self.embedding
        z, y = E.index(z), E.index(y)
        if z == y:
            raise InputError("preimage gap needs two distinct outcomes")
        c = np.zeros(E.n)
        c[y], c[z] = 1.0, -1.0
        fun, x = self._optimize(c)
        return PreimageBound((z, y), -fun, x)

    def min_weight(self, y):
        """Minimize ``p_y`` over the fiber; returns ``(value, witness)``."""
        c = np.zeros(self.embedding.n)
        c[self.embedding.index(y)] = 1.0
        return self._optimize(c)


def preimage_gap(E, u, z, y):
    return Fiber(E, u).max_gap(z, y)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_simplex(n, rng_seed):
    """Uniform point of the simplex: normalized i.i.d. exponential spacings."""
    if n < 1:
        raise InputError("n must be >= 1")
    e = _rng(rng_seed).exponential(size=n)
    return e / e.sum()


def sample_low_noise(n, alpha, y, rng_seed):
    """``(1 - alpha) delta_y + alpha q`` with ``q`` uniform on the simplex."""
    if not 0 <= alpha < 1:
        raise InputError(f"alpha must be in [0, 1), got {alpha}")
    p = alpha * sample_simplex(n, rng_seed)
    p[y] += 1 - alpha
    return p


def load_distribution(path):
    """Read ``{"labels": [...], "p": [...]}``; returns ``(labels, p)``."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        p = check_distribution(data["p"])
        labels = tuple(str(s) for s in data.get("labels") or default_labels(len(p)))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed distribution file: {exc}") from exc
    if len(labels) != len(p):
        raise InputError("labels and p have different lengths")
    return labels, p


def save_distribution(labels, p, path):
    with open(path, "w") as fh:
        json.dump({"labels": list(labels), "p": [float(x) for x in p]}, fh)
        fh.write("\n")
