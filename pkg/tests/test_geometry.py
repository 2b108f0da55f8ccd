import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from polysurrogate import geometry
from polysurrogate.errors import InputError
from polysurrogate.polytope import build_cross_polytope, build_permutahedron, build_unit_cube

SQUARE = build_unit_cube(2).vertices


def test_square_centroid_least_norm_witness():
    res = geometry.hull_membership([0, 0], SQUARE)
    assert res.inside
    np.testing.assert_allclose(res.coefficients, [0.25] * 4, atol=1e-12)


def test_outside_square():
    assert not geometry.hull_membership([2, 0], SQUARE).inside


def test_triangle_edge_midpoint():
    res = geometry.hull_membership([0.5, 0.5], [[1, 0], [0, 1], [0, 0]])
    assert res.inside
    np.testing.assert_allclose(res.coefficients, [0.5, 0.5, 0], atol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(InputError):
        geometry.hull_membership([0, 0, 0], SQUARE)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.integers(0, 2**31))
def test_membership_agrees_with_scipy(u, seed):
    V = np.random.default_rng(seed).normal(size=(6, 3))
    A = np.vstack([V.T, np.ones(6)])
    ref = linprog(np.zeros(6), A_eq=A, b_eq=np.append(u, 1), bounds=(0, None), method="highs")
    res = geometry.hull_membership(u, V)
    # skip numerically borderline points
    dist = geometry.project_onto_hull(u, V)[1]
    if dist > 1e-6 or ref.status == 0:
        assert res.inside == (ref.status == 0)
    if res.inside:
        np.testing.assert_allclose(res.coefficients @ V, u, atol=1e-8)


def test_project_vertex_and_box():
    x, d = geometry.project_onto_hull(SQUARE[2], SQUARE)
    np.testing.assert_allclose(x, SQUARE[2], atol=1e-12)
    assert d == pytest.approx(0, abs=1e-12)
    x, d = geometry.project_onto_hull([2, 0.5], SQUARE)
    np.testing.assert_allclose(x, [1, 0.5], atol=1e-9)
    assert d == pytest.approx(1.0)


def test_project_onto_permutahedron_against_dense_grid():
    V = build_permutahedron(3).vertices
    u = np.array([1.0, 1.0, 1.0])
    x, d = geometry.project_onto_hull(u, V)
    # dense barycentric grid over the six vertices, resolution 1e-3 along random mixtures
    rng = np.random.default_rng(0)
    W = rng.dirichlet(np.full(6, 0.3), size=200_000)
    best = np.min(np.linalg.norm(W @ V - u, axis=1))
    assert d <= best + 1e-12
    assert best - d < 1e-3
    np.testing.assert_allclose(x, [1 / 3] * 3, atol=1e-9)  # u projects onto the centroid direction


def test_hull_distance_examples():
    assert geometry.hull_distance(SQUARE, SQUARE) == pytest.approx(0, abs=1e-12)
    assert geometry.hull_distance([[0, 0]], [[3, 4]]) == pytest.approx(5)
    assert geometry.hull_distance(SQUARE, SQUARE + [3, 0]) == pytest.approx(1)


def test_is_edge_examples():
    assert geometry.is_edge(0, 1, SQUARE)  # (-1,-1) and (-1,1)
    assert not geometry.is_edge(0, 3, SQUARE)
    C = build_cross_polytope(2).vertices
    for i, j in itertools.combinations(range(4), 2):
        assert geometry.is_edge(i, j, C) == (j != i + 1 or i % 2 == 1)
