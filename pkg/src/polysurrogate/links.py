"""Link functions from surrogate reports back to outcomes.

``map_link`` decodes through the nearest vertex of the projected report.
``low_noise_link`` decodes to the nearest scaled copy
``P_y(alpha) = conv{(1 - alpha) v_y + alpha v : v in vert(P)}``; when those
copies are pairwise disjoint the pair (loss, link) is calibrated for every
distribution whose largest probability is at least ``1 - alpha``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import geometry
from .errors import InputError

TIE_TOL = 1e-9
DISJOINT_TOL = 1e-9


class LinkDecision(NamedTuple):
    outcome: int
    distance: float
    tie: bool


def _decide(distances, tau):
    if tau < 0:
        raise InputError("tie tolerance must be nonnegative")
    best = distances.min()
    tied = np.flatnonzero(distances <= best + tau)
    return LinkDecision(int(tied[0]), float(distances[tied[0]]), len(tied) > 1)


def map_link(E, u, tau=TIE_TOL):
    """Nearest vertex to the projection of ``u``; ties go to the lowest index."""
    x, _ = E.polytope.project(u)
    return _decide(np.linalg.norm(E.vertices - x, axis=1), tau)


@dataclass(frozen=True, eq=False)
class ScaledFamily:
    embedding: object
    alpha: float

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise InputError(f"alpha must be in [0, 1], got {self.alpha}")

    def member(self, y):
        """Vertices of the scaled copy anchored at outcome ``y`` (row ``y`` is ``v_y``)."""
        E = self.embedding
        vy = E.vertex(y)
        return (1 - self.alpha) * vy + self.alpha * E.vertices

    @property
    def members(self):
        return {label: self.member(i) for i, label in enumerate(self.embedding.labels)}

    def distance(self, u, y):
        """Distance from ``u`` to the scaled copy at ``y``.

        The copy is ``(1 - alpha) v_y + alpha P``, so the projection reuses the
        base polytope's projection after an affine change of variables.
        """
        E = self.embedding
        offset = (1 - self.alpha) * E.vertex(y)
        if self.alpha == 0:
            return float(np.linalg.norm(u - offset))
        _, dist = E.polytope.project((u - offset) / self.alpha)
        return self.alpha * dist


def scaled_family(E, alpha):
    return ScaledFamily(E, float(alpha))


def low_noise_link(F, u, tau=TIE_TOL):
    u = geometry.as_point(u, F.embedding.dim)
    distances = np.array([F.distance(u, y) for y in range(F.embedding.n)])
    return _decide(distances, tau)


def pairwise_distances(F):
    """Rows ``(y, yhat, distance)`` over unordered outcome pairs."""
    rows = []
    for y, yh in itertools.combinations(range(F.embedding.n), 2):
        rows.append((y, yh, geometry.hull_distance(F.member(y), F.member(yh))))
    return rows


def pairwise_disjointness(F):
    """``(min_distance, (y, yhat))`` over all pairs of scaled copies."""
    if F.embedding.n < 2:
        raise InputError("need at least two outcomes")
    y, yh, dist = min(pairwise_distances(F), key=lambda row: row[2])
    return dist, (y, yh)


def is_disjoint(F, tol=DISJOINT_TOL):
    return pairwise_disjointness(F)[0] > tol


def alpha_threshold(E, tol=1e-4, disjoint_tol=DISJOINT_TOL):
    """Bisection for the largest ``alpha`` at which the scaled copies stay disjoint."""
    if tol <= 0:
        raise InputError("tol must be positive")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_disjoint(scaled_family(E, mid), disjoint_tol):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
