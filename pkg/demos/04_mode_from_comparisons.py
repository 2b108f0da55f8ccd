"""
The mode from pairwise comparisons
==================================

Eight outcomes, seven cross-polytope problems in four dimensions. Each problem
puts four pairs of outcomes on opposite vertices; the sign of each coordinate
of the minimizer says which outcome of the pair is more likely.
"""

import numpy as np

from polysurrogate.embedding import mode, sample_simplex
from polysurrogate.multi_instance import elicit_mode_end_to_end, largest_total_order_subset, relation_table, round_robin_plan

plan = round_robin_plan(8)
for j, m in enumerate(plan.pairings):
    print(j, [plan.labels[a] + plan.labels[b] for a, b in m])

p = sample_simplex(8, 3)
res = elicit_mode_end_to_end(p, plan, noise=1e-4, rng=1)
print("p =", p.round(3))
print("elicited", sorted(plan.labels[k] for k in res.mode), "true", sorted(plan.labels[k] for k in mode(p)))

# with heavy noise the reports can contradict each other
res = elicit_mode_end_to_end(np.array([0.14, 0.13, 0.13, 0.12, 0.12, 0.12, 0.12, 0.12]), plan, noise=0.05, rng=2)
print("path:", res.diagnostics["path"], "mode:", sorted(plan.labels[k] for k in res.mode))
if res.diagnostics["path"] == "relation_table":
    print("kept outcomes:", sorted(plan.labels[k] for k in res.diagnostics["subset"]))
    table = relation_table(res.diagnostics["reports"], n=8)
    print(largest_total_order_subset(table))
