"""
Training the surrogate
======================

Without features the surrogate's best report is the average embedded outcome.
Stochastic gradient steps on sampled outcomes get there; the averaged iterate
lands close to the empirical vertex mean.
"""

import numpy as np

from polysurrogate.embedding import embed, make_embedding
from polysurrogate.links import map_link
from polysurrogate.polytope import build_unit_cube
from polysurrogate.surrogate import InducedLoss, squared_euclidean
from polysurrogate.trainer import TrainConfig, sgd_minimize

E = make_embedding(build_unit_cube(2))
L = InducedLoss(squared_euclidean(), E)
p = np.array([0.7, 0.1, 0.1, 0.1])

trace = sgd_minimize(L, p, TrainConfig(steps=50_000, seed=0))
print("final report", trace.final_report, "target", embed(E, trace.empirical))
print("linked outcome", E.labels[map_link(E, trace.final_report).outcome])
print("loss at start / end", trace.loss_curve[0], trace.loss_curve[-1])

full = sgd_minimize(L, p, TrainConfig(steps=500, batch=10_000, n_samples=10_000))
print("full batch error", np.linalg.norm(full.final_report - embed(E, full.empirical)))
