import numpy as np
import pytest

from polysurrogate.embedding import make_embedding
from polysurrogate.polytope import build_cross_polytope, build_permutahedron, build_unit_cube

POLYTOPES = {
    "cube2": lambda: build_unit_cube(2),
    "cube3": lambda: build_unit_cube(3),
    "cross2": lambda: build_cross_polytope(2),
    "cross3": lambda: build_cross_polytope(3),
    "perm3": lambda: build_permutahedron(3),
}


@pytest.fixture(params=sorted(POLYTOPES))
def embedding(request):
    return make_embedding(POLYTOPES[request.param]())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
