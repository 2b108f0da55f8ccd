"""Bregman generators and the surrogate losses they induce on an embedding.

The loss of report ``u`` on outcome ``y`` is the Bregman divergence of the
outcome's vertex from the report,

    L(u, y) = G(v_y) - G(u) - <grad G(u), v_y - u>,

so that the expected loss under ``p`` is uniquely minimized at
``embed(p)`` for every strictly convex ``G``. Its gradient in ``u`` is
``H(u) (u - v_y)`` with ``H`` the Hessian of ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .embedding import Embedding, check_distribution, embed
from .errors import InputError, SolverError
from .geometry import as_point

FD_STEP = 1e-5


@dataclass(frozen=True)
class BregmanGenerator:
    name: str
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray] | None = None

    def hessian_vector(self, u, v):
        if self.hessian is not None:
            return self.hessian(u) @ v
        # central difference of the gradient along v
        scale = max(np.linalg.norm(v), 1e-300)
        h = FD_STEP / scale
        return (self.gradient(u + h * v) - self.gradient(u - h * v)) / (2 * h)


def squared_euclidean():
    return BregmanGenerator(
        "sqeuclid",
        value=lambda x: 0.5 * float(x @ x),
        gradient=lambda x: np.array(x, dtype=float),
        hessian=lambda x: np.eye(len(x)),
    )


def diag_quadratic(a):
    """``G(x) = x^T diag(a) x / 2`` with positive ``a``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or np.any(a <= 0):
        raise InputError("diagonal quadratic weights must be positive")
    return BregmanGenerator(
        "diagquad:" + ",".join(f"{x:g}" for x in a),
        value=lambda x: 0.5 * float(x @ (a * x)),
        gradient=lambda x: a * x,
        hessian=lambda x: np.diag(a),
    )


_REGISTRY: dict[str, BregmanGenerator] = {}


def validate_generator(gen, dim, rng=0, n_pairs=1000, rel_tol=1e-5):
    """Desk-scale checks of strict convexity and of the gradient.

    Raises :class:`InputError` if some random pair has a nonpositive
    divergence or the gradient disagrees with central differences.
    """
    rng = np.random.default_rng(rng)
    X = rng.normal(size=(n_pairs, dim))
    U = rng.normal(size=(n_pairs, dim))
    for x, u in zip(X, U):
        if not bregman(gen, x, u) > 0:
            raise InputError(f"generator {gen.name!r} is not strictly convex at {x}, {u}")
    for x in X[:100]:
        g = np.asarray(gen.gradient(x), dtype=float)
        fd = np.empty(dim)
        for k in range(dim):
            e = np.zeros(dim)
            e[k] = FD_STEP
            fd[k] = (gen.value(x + e) - gen.value(x - e)) / (2 * FD_STEP)
        if np.linalg.norm(g - fd) > rel_tol * max(1.0, np.linalg.norm(fd)):
            raise InputError(f"gradient of {gen.name!r} disagrees with finite differences at {x}")
    return gen


def register_generator(gen, dim):
    _REGISTRY[gen.name] = validate_generator(gen, dim)
    return gen


def parse_generator(spec, dim=None):
    """``sqeuclid``, ``diagquad:a1,...,ad`` or the name of a registered generator."""
    if spec in (None, "", "sqeuclid"):
        return squared_euclidean()
    if spec.startswith("diagquad:"):
        try:
            a = [float(x) for x in spec[len("diagquad:") :].split(",")]
        except ValueError:
            raise InputError(f"bad generator spec {spec!r}") from None
        if dim is not None and len(a) != dim:
            raise InputError(f"generator has {len(a)} weights for dimension {dim}")
        return diag_quadratic(a)
    if spec in _REGISTRY:
        return _REGISTRY[spec]
    raise InputError(f"unknown generator {spec!r}")


def bregman(gen, x, u):
    """``G(x) - G(u) - <grad G(u), x - u>``."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape:
        raise InputError(f"dimension mismatch: {x.shape} vs {u.shape}")
    return float(gen.value(x) - gen.value(u) - gen.gradient(u) @ (x - u))


@dataclass(frozen=True)
class InducedLoss:
    generator: BregmanGenerator
    embedding: Embedding


def loss(L, u, y):
    u = as_point(u, L.embedding.dim)
    return bregman(L.generator, L.embedding.vertex(y), u)


def gradient(L, u, y):
    u = as_point(u, L.embedding.dim)
    return L.generator.hessian_vector(u, u - L.embedding.vertex(y))


def expected_loss(L, u, p):
    p = check_distribution(p, L.embedding.n)
    u = as_point(u, L.embedding.dim)
    gen = L.generator
    V = L.embedding.vertices
    gu, grad = gen.value(u), gen.gradient(u)
    values = np.array([gen.value(v) for v in V]) - gu - (V - u) @ grad
    return float(p @ values)


def expected_gradient(L, u, p):
    p = check_distribution(p, L.embedding.n)
    u = as_point(u, L.embedding.dim)
    grads = [L.generator.hessian_vector(u, u - v) for v in L.embedding.vertices]
    return p @ np.array(grads)


def minimizer(L, p, tol=1e-8):
    """The unique expected-loss minimizer, ``embed(p)``."""
    u = embed(L.embedding, p)
    g = expected_gradient(L, u, p)
    if np.linalg.norm(g) > tol:
        raise SolverError("expected gradient does not vanish at embed(p)", best=u, gap=float(np.linalg.norm(g)))
    return u
