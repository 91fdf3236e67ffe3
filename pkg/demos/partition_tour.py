"""Evaluate vertex-model partition functions three ways and compare them."""

import random

from vertexmodels import (
    Gaussian,
    Multigraph,
    cycle_graph,
    disjoint_union,
    model_from_function,
    path_graph,
    random_model,
)
from vertexmodels.partition import partition_batch, partition_brute, partition_contract

# Two colours; a vertex accepts at most one edge of colour 1. Colour-1 edges
# then form a matching, so f counts the matchings of the graph.
matching = model_from_function(2, lambda a: 1 if a[1] <= 1 else 0, 12)

for name, G in [("P3", path_graph(3)), ("C4", cycle_graph(4)), ("C3 + C3", disjoint_union(cycle_graph(3), cycle_graph(3)))]:
    print(f"{name:8s} matchings = {partition_brute(G, matching)}")

# One colour with y_d = i^d: every edge contributes i twice, so f = (-1)^|E|.
sign = model_from_function(1, lambda a: Gaussian(0, 1) ** a[0], 16, "gaussian")
print("sign model on K4:", partition_contract(Multigraph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)]), sign))

# A loop adds its colour twice at its vertex.
loop = Multigraph(1, [(0, 0)])
print("loop with y_(2) = 7:", partition_brute(loop, model_from_function(1, lambda a: 7 if a[0] == 2 else 0, 4)))

# The engines agree on random inputs; the batch engine evaluates many graphs at once.
rng = random.Random(1)
y = random_model(rng, 3, 12, "gaussian", denominators=(1, 2))
graphs = [Multigraph(5, [(rng.randrange(5), rng.randrange(5)) for _ in range(7)]) for _ in range(20)]
brute = [partition_brute(G, y) for G in graphs]
assert brute == [partition_contract(G, y) for G in graphs] == partition_batch(graphs, y)
print("20 random graphs, k = 3, all engines agree; first value:", brute[0])
