"""Exact ranks: moment matrices of models and slices of connection matrices."""

import random

from vertexmodels import (
    connection_slice,
    counterexample_oracle,
    enumerate_labeled,
    exact_rank,
    format_scalar,
    model_from_function,
    moment_slice,
    random_rank_r_model,
    rank_bound_check,
)
from vertexmodels.certify import vertex_power_oracle

rng = random.Random(3)

# y_d = 1 + 2^d is the sum of two geometric sequences, so its moment matrix has rank 2.
y = model_from_function(1, lambda a: 1 + 2 ** a[0], 6)
M = moment_slice(y, 2)
print("moment slice of 1 + 2^d:", [[format_scalar(v) for v in row] for row in M.matrix], "rank", exact_rank(M))

for r in (1, 2, 3):
    z = random_rank_r_model(rng, 2, r, 8)
    print(f"random rank-{r} model, k = 2: moment ranks", [exact_rank(moment_slice(z, d)) for d in range(4)])

# Connection slices: rows and columns are 1-labeled graphs, entries f(G glued to H).
fam = enumerate_labeled(1, 2, 3)
print("1-labeled graphs with <= 2 extra vertices and <= 3 edges:", len(fam))
print("counterexample slice rank:", exact_rank(connection_slice(counterexample_oracle(), fam)), "(bound 4)")
print("2^|V| slice rank:", exact_rank(connection_slice(vertex_power_oracle(), fam)))

for l in (0, 1, 2):
    fam = enumerate_labeled(l, 1, 2)
    rank, bound, ok = rank_bound_check(random_rank_r_model(rng, 2, 2, 12), 2, l, fam)
    print(f"rank-2 model, l = {l}: rank {rank} <= {bound}: {ok}")
