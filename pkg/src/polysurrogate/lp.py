"""Dense two-phase simplex for tiny equality-form linear programs.

Everything in this package that needs an LP (hull membership, edge
certificates, fiber analysis) has the form

    minimize c @ x   subject to   A @ x = b,  x >= 0

with at most a few dozen variables, so a dense tableau with Bland's rule is
both fast enough and immune to cycling on the highly degenerate problems
that polytope vertices produce.

A feasible basis found by phase one can be reused for any number of
objectives; see :meth:`FeasibleTableau.minimize`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import SolverError

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11


class LPResult(NamedTuple):
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    fun: float


def _pivot(T, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T, basis, n_cols, tol, max_iter):
    """Bland's-rule pivoting on tableau ``T`` (objective in the last row).

    Returns False if the LP is unbounded.
    """
    m = T.shape[0] - 1
    for _ in range(max_iter):
        cost = T[-1, :n_cols]
        candidates = np.flatnonzero(cost < -tol)
        if candidates.size == 0:
            return True
        j = candidates[0]
        column = T[:m, j]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return False
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        r = tied[np.argmin(np.asarray(basis)[tied])]
        _pivot(T, r, j)
        basis[r] = j
    raise SolverError("simplex iteration cap reached")


class FeasibleTableau:
    """A basic feasible solution of ``A x = b, x >= 0``.

    Built by :func:`phase_one`; redundant equality rows have already been
    removed.
    """

    def __init__(self, body, basis, n, tol):
        self._body = body  # (m, n + 1) with the rhs in the last column
        self._basis = list(basis)
        self.n = n
        self.tol = tol

    @property
    def x(self):
        x = np.zeros(self.n)
        x[self._basis] = np.maximum(self._body[:, -1], 0.0)
        return x

    def minimize(self, c, max_iter=None):
        """Optimize ``c @ x`` starting from this basis (the basis is not mutated)."""
        c = np.asarray(c, dtype=float)
        m = self._body.shape[0]
        T = np.empty((m + 1, self.n + 1))
        T[:m] = self._body
        cb = c[self._basis]
        T[-1, : self.n] = c - cb @ self._body[:, : self.n]
        T[-1, -1] = -cb @ self._body[:, -1]
        basis = list(self._basis)
        max_iter = max_iter or 50 * (m + self.n + 1)
        if not _run(T, basis, self.n, self.tol, max_iter):
            return LPResult("unbounded", None, -np.inf)
        x = np.zeros(self.n)
        x[basis] = np.maximum(T[:m, -1], 0.0)
        return LPResult("optimal", x, float(c @ x))


def phase_one(A, b, tol=FEAS_TOL, max_iter=None):
    """Find a feasible basis of ``A x = b, x >= 0``.

    Returns ``(tableau, infeasibility)``; ``tableau`` is None when the sum of
    artificial variables cannot be driven below ``tol * (1 + max|b|)``.
    """
    A = np.array(A, dtype=float, ndmin=2)
    b = np.array(b, dtype=float).ravel()
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError(f"A has {m} rows but b has {b.shape[0]} entries")
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    max_iter = max_iter or 50 * (m + n + 1)
    _run(T, basis, n + m, tol, max_iter)

    infeasibility = float(-T[-1, -1])
    if infeasibility > tol * (1.0 + (b.max() if m else 0.0)):
        return None, infeasibility

    # drive remaining artificials out of the basis; rows that cannot pivot are redundant
    keep = []
    for r in range(m):
        if basis[r] >= n:
            cols = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
            if cols.size == 0:
                continue
            _pivot(T, r, cols[0])
            basis[r] = cols[0]
        keep.append(r)
    body = np.hstack([T[keep][:, :n], T[keep][:, -1:]])
    return FeasibleTableau(body, [basis[r] for r in keep], n, tol), infeasibility


def linprog_eq(c, A, b, tol=FEAS_TOL):
    """Minimize ``c @ x`` subject to ``A x = b``, ``x >= 0``."""
    tableau, _ = phase_one(A, b, tol)
    if tableau is None:
        return LPResult("infeasible", None, np.inf)
    return tableau.minimize(c)
