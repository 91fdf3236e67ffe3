"""Alternating sums over pin maps: they vanish for partition functions of
k-colour models once |U| = k + 1, and a non-model parameter is caught."""

import random

from vertexmodels import (
    PinMap,
    alt_sum_contract,
    alt_sum_pins,
    counterexample_oracle,
    model_oracle,
    path_graph,
    random_model,
    random_rank_r_model,
    search_violation,
    sweep,
)
from vertexmodels.graphs import enumerate_graphs

rng = random.Random(7)

# Pins: s sends each u in U to a vertex; G_s gains the edges {u, s(u)}.
y = random_model(rng, 2, 12)
f = model_oracle(y)
G = path_graph(4)
print("k = 2, |U| = 3:", alt_sum_pins(f, G, PinMap((0, 1, 3), (2, 2, 0))))
print("k = 2, |U| = 2:", alt_sum_pins(f, G, PinMap((0, 3), (1, 2))), "(no reason to vanish)")

# Every (U, s) on every small graph at once.
checked = 0
for H in enumerate_graphs(4, 4, min_n=3):
    S = sweep(f, H, 3)
    assert not S.nonzero()
    checked += len(S)
print(f"{checked} pin sums on graphs with n <= 4, |E| <= 4: all zero")

# Contraction needs a low-rank model: y_alpha = sum_j c_j a_j^alpha with r points.
z = random_rank_r_model(rng, 3, 2, 14)
print("rank 2, |U| = 3, contraction:", alt_sum_contract(model_oracle(z), path_graph(5), PinMap((0, 2, 4), (1, 3, 3))))

# (-2)^components on 2-regular graphs, 0 elsewhere. It is multiplicative, yet
# already the smallest pin sum with |U| = 2 is nonzero.
w = search_violation(counterexample_oracle(), 2, 4)
print("counterexample witness:", w.to_json())
