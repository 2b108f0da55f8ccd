import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from polysurrogate import projection
from polysurrogate.errors import SolverError

finite = st.floats(-5, 5, allow_nan=False)


def qp_oracle(u, V):
    """Projection onto conv(V) via SLSQP over simplex weights."""
    n = len(V)
    res = minimize(
        lambda w: np.sum((w @ V - u) ** 2),
        np.full(n, 1 / n),
        jac=lambda w: 2 * V @ (w @ V - u),
        bounds=[(0, 1)] * n,
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1}],
        method="SLSQP",
        options={"ftol": 1e-14, "maxiter": 500},
    )
    return res.x @ V


@given(arrays(float, 3, elements=finite))
def test_box_projection_is_clip(u):
    np.testing.assert_array_equal(projection.project_box(u), np.clip(u, -1, 1))


@given(arrays(float, 4, elements=finite))
def test_l1_projection_feasible_and_optimal(u):
    x = projection.project_l1_ball(u)
    assert np.abs(x).sum() <= 1 + 1e-12
    # variational inequality against the ball's vertices
    V = np.vstack([np.eye(4), -np.eye(4)])
    assert np.all((u - x) @ (V - x).T <= 1e-9)


def test_l1_projection_inside_is_identity():
    u = np.array([0.2, -0.3, 0.1])
    np.testing.assert_array_equal(projection.project_l1_ball(u), u)


@given(st.lists(finite, min_size=1, max_size=12))
def test_isotonic_decreasing_is_sorted_and_mean_preserving(y):
    y = np.array(y)
    x = projection.isotonic_decreasing(y)
    assert np.all(np.diff(x) <= 1e-12)
    assert x.sum() == pytest.approx(y.sum(), abs=1e-9)


def test_isotonic_decreasing_brute_force():
    y = np.array([1.0, 3.0, 2.0, 0.0, 4.0])
    x = projection.isotonic_decreasing(y)
    np.testing.assert_allclose(x, [2.0, 2.0, 2.0, 2.0, 2.0])
    np.testing.assert_allclose(projection.isotonic_decreasing(np.array([3.0, 1.0, 2.0])), [3, 1.5, 1.5])


@settings(max_examples=40, deadline=None)
@given(arrays(float, 3, elements=finite))
def test_permutahedron_projection_matches_qp(z):
    w = np.array([0.0, 1 / 3, 2 / 3])
    V = np.array([w[list(p)] for p in itertools.permutations(range(3))])
    x = projection.project_permutahedron(z, w)
    ref = qp_oracle(z, V)
    assert np.linalg.norm(z - x) <= np.linalg.norm(z - ref) + 1e-7
    mnp, _, _ = projection.min_norm_point(V - z)
    np.testing.assert_allclose(x, mnp + z, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(arrays(float, (6, 3), elements=finite), arrays(float, 3, elements=finite))
def test_min_norm_point_matches_qp(V, u):
    x, w, gap = projection.min_norm_point(V - u)
    assert gap <= 1e-8
    assert w.min() >= -1e-12 and w.sum() == pytest.approx(1)
    ref = qp_oracle(u, V)
    assert np.linalg.norm(x) <= np.linalg.norm(ref - u) + 1e-6


def test_min_norm_point_origin_inside():
    V = np.array([[1.0, 0], [-1, 1], [-1, -1]])
    x, _, _ = projection.min_norm_point(V)
    assert np.linalg.norm(x) < 1e-12


def test_min_norm_point_iteration_cap():
    rng = np.random.default_rng(0)
    with pytest.raises(SolverError):
        projection.min_norm_point(rng.normal(size=(40, 5)) + 3, max_iter=1)
