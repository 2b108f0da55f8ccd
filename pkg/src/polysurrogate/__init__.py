"""Polytope embeddings of multiclass outcomes and their Bregman surrogate losses."""

from .embedding import Embedding, embed, make_embedding, mode
from .errors import ConsistencyError, InputError, SolverError, TrainingError
from .links import alpha_threshold, low_noise_link, map_link, scaled_family
from .polytope import Polytope, build_cross_polytope, build_permutahedron, build_unit_cube, from_vertices
from .regions import Category, classify_point, hallucination_witness
from .surrogate import InducedLoss, diag_quadratic, squared_euclidean

__version__ = "0.1.0"
