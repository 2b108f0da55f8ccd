"""Euclidean projections onto polytopes.

Closed forms for the box, the l1 ball and the permutahedron, plus Wolfe's
min-norm-point algorithm for arbitrary finite vertex sets.
"""

from __future__ import annotations

import numpy as np

from .errors import SolverError


def project_box(u, lo=-1.0, hi=1.0):
    return np.clip(np.asarray(u, dtype=float), lo, hi)


def project_l1_ball(u, radius=1.0):
    """Projection onto ``{x : ||x||_1 <= radius}`` by soft thresholding."""
    u = np.asarray(u, dtype=float)
    a = np.abs(u)
    if a.sum() <= radius:
        return u.copy()
    # threshold from the projection of |u| onto the simplex of size `radius`
    mu = np.sort(a)[::-1]
    cssv = np.cumsum(mu) - radius
    ind = np.arange(1, len(u) + 1)
    rho = np.count_nonzero(mu - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    return np.sign(u) * np.maximum(a - theta, 0.0)


def isotonic_decreasing(y):
    """Least-squares fit of ``y`` by a non-increasing sequence (pool adjacent violators)."""
    y = np.asarray(y, dtype=float)
    sums, counts = [], []
    for value in y:
        sums.append(value)
        counts.append(1)
        while len(sums) > 1 and sums[-2] / counts[-2] < sums[-1] / counts[-1]:
            s, c = sums.pop(), counts.pop()
            sums[-1] += s
            counts[-1] += c
    return np.repeat([s / c for s, c in zip(sums, counts)], counts)


def project_permutahedron(z, w):
    """Projection of ``z`` onto the permutahedron ``conv{pi(w)}``.

    Sort ``z`` in decreasing order, subtract the decreasingly sorted weights,
    fit a non-increasing sequence to the residual and undo the sort.
    """
    z = np.asarray(z, dtype=float)
    order = np.argsort(-z, kind="stable")
    s = z[order]
    v = isotonic_decreasing(s - np.sort(np.asarray(w, dtype=float))[::-1])
    out = np.empty_like(z)
    out[order] = s - v
    return out


def _affine_minimizer(Q):
    """Weights ``v`` (summing to one) minimizing ``||Q.T @ v||``."""
    k = Q.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = Q @ Q.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:k]


def min_norm_point(P, tol=1e-8, max_iter=1000):
    """Wolfe's algorithm: the point of minimum norm in ``conv(P)``.

    Returns ``(x, weights, gap)`` where ``weights`` is a convex combination of
    the rows of ``P`` giving ``x`` and ``gap = |x|^2 - min_j P_j . x`` bounds
    ``|x - x*|^2``. Iterates until the corral is exact (machine precision);
    raises :class:`SolverError` if the final gap still exceeds ``tol``.
    """
    P = np.asarray(P, dtype=float)
    k = P.shape[0]
    norms = np.einsum("ij,ij->i", P, P)
    scale = max(1.0, norms.max())
    eps = 1e-14
    S = [int(np.argmin(norms))]
    w = np.array([1.0])
    x = P[S[0]].copy()
    gap = np.inf
    for _ in range(max_iter):
        dots = P @ x
        j = int(np.argmin(dots))
        gap = float(x @ x - dots[j])
        if gap <= 1e-15 * scale or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        for _ in range(max_iter):
            v = _affine_minimizer(P[S])
            if np.all(v > eps):
                w = v
                break
            mask = (v <= eps) & (w - v > 0)
            theta = min(1.0, np.min(w[mask] / (w[mask] - v[mask]))) if mask.any() else 0.0
            w = w + theta * (v - w)
            keep = w > eps
            if not keep.any():
                keep[np.argmax(w)] = True
            S = [s for s, kk in zip(S, keep) if kk]
            w = w[keep] / w[keep].sum()
        x = w @ P[S]
    else:
        raise SolverError("min-norm point iteration cap reached", best=x, gap=gap)
    weights = np.zeros(k)
    weights[S] = w
    gap = max(gap, 0.0)
    if gap > tol:
        raise SolverError(f"min-norm point gap {gap:.3g} exceeds {tol:.3g}", best=x, gap=gap)
    return x, weights, gap
