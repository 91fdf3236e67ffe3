"""Finite slices of connection matrices over ``l``-labeled multigraphs.

The connection matrix of a parameter ``f`` has rows and columns indexed by
``l``-labeled graphs, with entry ``f(G H)`` for the graph obtained by gluing
``G`` and ``H`` along equal labels. Only finite principal submatrices are
computed here; their rank is a lower bound for the rank of the whole matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .certify import ParamOracle, model_oracle
from .errors import CapExceededError, GraphError
from .graphs import LabeledGraph, Multigraph, glue_labeled, labeled_canonical_form
from .models import VertexModel, exact_rank

MAX_RAW_GRAPHS = 20000


@dataclass(frozen=True)
class LabeledFamily:
    l: int
    graphs: tuple
    max_extra: int
    max_edges: int

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def subfamily(self, indices) -> "LabeledFamily":
        return LabeledFamily(self.l, tuple(self.graphs[i] for i in indices), self.max_extra, self.max_edges)


def _raw_count(n: int, max_edges: int) -> int:
    slots = n * (n + 1) // 2
    if slots == 0:
        return 1
    return sum(math.comb(slots + m - 1, m) for m in range(max_edges + 1))


def enumerate_labeled(l: int, max_extra: int, max_edges: int,
                      max_raw: int = MAX_RAW_GRAPHS) -> LabeledFamily:
    """All ``l``-labeled multigraphs (loops allowed) with at most ``max_extra``
    unlabeled vertices and ``max_edges`` edges, one per label-preserving
    isomorphism class, ordered by ``(n, |E|, edges)``."""
    if min(l, max_extra, max_edges) < 0:
        raise GraphError("family bounds must be non-negative")
    raw = sum(_raw_count(l + e, max_edges) for e in range(max_extra + 1))
    if raw > max_raw:
        raise CapExceededError(f"family bounds would generate {raw} raw graphs (limit {max_raw})")
    seen = set()
    for extra in range(max_extra + 1):
        n = l + extra
        slots = [(u, v) for u in range(n) for v in range(u, n)]
        for m in range(max_edges + 1):
            for edges in itertools.combinations_with_replacement(slots, m):
                G = LabeledGraph(Multigraph(n, edges), tuple(range(l)))
                seen.add(labeled_canonical_form(G))
    ordered = sorted(seen, key=lambda G: (G.graph.n, G.graph.num_edges, G.graph.edges))
    return LabeledFamily(l, tuple(ordered), max_extra, max_edges)


def connection_slice(f: ParamOracle, fam: LabeledFamily) -> list[list]:
    """The matrix ``(f(glue(G, H)))`` for ``G, H`` in the family."""
    glued = [glue_labeled(G, H) for G in fam.graphs for H in fam.graphs]
    values = f.many(glued)
    size = len(fam)
    return [values[i * size:(i + 1) * size] for i in range(size)]


@dataclass(frozen=True)
class RankCheck:
    rank: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.rank <= self.bound

    def __iter__(self):
        return iter((self.rank, self.bound, self.ok))


def rank_bound_check(y: VertexModel, r: int, l: int, fam: LabeledFamily) -> RankCheck:
    """Exact rank of the slice for ``f_y`` against the bound ``r^l``.

    ``r`` is the rank the caller vouches for (for instance the number of points
    used to build ``y``)."""
    if fam.l != l:
        raise GraphError(f"family is {fam.l}-labeled, expected {l}")
    rank = exact_rank(connection_slice(model_oracle(y), fam)) if len(fam) else 0
    return RankCheck(rank, r**l)
