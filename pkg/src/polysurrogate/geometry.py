"""Convex-hull primitives on finite vertex sets.

A vertex set is an ``(n, d)`` float array, one vertex per row. All routines
are pure functions; LPs go through :mod:`polysurrogate.lp` and projections
through Wolfe's algorithm in :mod:`polysurrogate.projection`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import lp
from .errors import InputError
from .projection import min_norm_point

LP_TOL = 1e-9
GAP_TOL = 1e-8


class HullMembership(NamedTuple):
    inside: bool
    coefficients: np.ndarray | None
    residual: float


def as_vertex_set(V, check_distinct=True):
    V = np.array(V, dtype=float, ndmin=2)
    if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
        raise InputError(f"vertex set must be a non-empty (n, d) array, got shape {V.shape}")
    if not np.all(np.isfinite(V)):
        raise InputError("vertex set has non-finite entries")
    if check_distinct and V.shape[0] > 1:
        diff = np.abs(V[:, None, :] - V[None, :, :]).max(axis=-1)
        np.fill_diagonal(diff, np.inf)
        if diff.min() <= 1e-12:
            i, j = np.unravel_index(np.argmin(diff), diff.shape)
            raise InputError(f"vertices {min(i, j)} and {max(i, j)} coincide")
    return V


def as_point(u, dim=None):
    u = np.asarray(u, dtype=float).ravel()
    if dim is not None and u.shape[0] != dim:
        raise InputError(f"point has dimension {u.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(u)):
        raise InputError("point has non-finite entries")
    return u


def hull_membership(u, V, tol=LP_TOL):
    """Decide ``u in conv(V)``; when inside, return the witness weights."""
    V = as_vertex_set(V, check_distinct=False)
    u = as_point(u, V.shape[1])
    A = np.vstack([V.T, np.ones(V.shape[0])])
    b = np.append(u, 1.0)
    tableau, infeasibility = lp.phase_one(A, b, tol)
    if tableau is None:
        return HullMembership(False, None, infeasibility)
    lam = tableau.x
    lam /= lam.sum()
    # prefer the least-norm solution of the equality system when it is feasible
    central = np.linalg.lstsq(A, b, rcond=None)[0]
    if central.min() >= -1e-12 and np.abs(A @ central - b).max() <= 1e-10:
        lam = np.maximum(central, 0.0)
        lam /= lam.sum()
    residual = float(np.abs(V.T @ lam - u).max())
    if residual > 1e-8:
        return HullMembership(False, None, residual)
    return HullMembership(True, lam, residual)


def project_onto_hull(u, V, tol=GAP_TOL):
    """Euclidean projection of ``u`` onto ``conv(V)``; returns ``(x, ||u - x||)``."""
    V = as_vertex_set(V, check_distinct=False)
    u = as_point(u, V.shape[1])
    if tol <= 0:
        raise InputError("tol must be positive")
    y, _, _ = min_norm_point(V - u, tol=tol)
    return u + y, float(np.linalg.norm(y))


def hull_distance(V1, V2, tol=GAP_TOL):
    """Distance between ``conv(V1)`` and ``conv(V2)``.

    The min-norm point of the Minkowski difference ``conv{a - b}``.
    """
    V1 = as_vertex_set(V1, check_distinct=False)
    V2 = as_vertex_set(V2, check_distinct=False)
    if V1.shape[1] != V2.shape[1]:
        raise InputError(f"dimension mismatch: {V1.shape[1]} vs {V2.shape[1]}")
    D = (V1[:, None, :] - V2[None, :, :]).reshape(-1, V1.shape[1])
    y, _, _ = min_norm_point(D, tol=tol)
    return float(np.linalg.norm(y))


def is_edge(i, j, V, tol=LP_TOL):
    """True iff ``conv(v_i, v_j)`` is an edge of ``conv(V)``.

    Searches for a functional ``a`` with ``a.v_i = a.v_j`` and
    ``a.v_i >= a.v_k + 1`` for every other vertex ``k``.
    """
    V = as_vertex_set(V, check_distinct=False)
    n, d = V.shape
    if not (0 <= i < n and 0 <= j < n):
        raise InputError(f"vertex index out of range for {n} vertices")
    if i == j:
        raise InputError("is_edge needs two distinct vertices")
    others = [k for k in range(n) if k not in (i, j)]
    # variables: a+ (d), a- (d), slack per other vertex
    m = 1 + len(others)
    A = np.zeros((m, 2 * d + len(others)))
    b = np.zeros(m)
    diff = V[i] - V[j]
    A[0, :d], A[0, d : 2 * d] = diff, -diff
    for r, k in enumerate(others, start=1):
        g = V[i] - V[k]
        A[r, :d], A[r, d : 2 * d] = g, -g
        A[r, 2 * d + r - 1] = -1.0
        b[r] = 1.0
    tableau, _ = lp.phase_one(A, b, tol)
    return tableau is not None
