import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import ref_rank
from vertexmodels.certify import counterexample_oracle, model_oracle, vertex_power_oracle
from vertexmodels.connection import connection_slice, enumerate_labeled, rank_bound_check
from vertexmodels.errors import CapExceededError, GraphError
from vertexmodels.graphs import LabeledGraph, Multigraph, glue_labeled
from vertexmodels.models import exact_rank, random_model, random_rank_r_model


def ref_family_size(l, max_extra, max_edges):
    """Label-preserving isomorphism classes, found by trying every relabelling
    of the unlabeled vertices."""
    classes = set()
    for extra in range(max_extra + 1):
        n = l + extra
        slots = [(u, v) for u in range(n) for v in range(u, n)]
        for m in range(max_edges + 1):
            for edges in itertools.combinations_with_replacement(slots, m):
                keys = []
                for tail in itertools.permutations(range(l, n)):
                    perm = list(range(l)) + list(tail)
                    keys.append(tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges)))
                classes.add((n, min(keys)))
    return len(classes)


@pytest.mark.parametrize("l, extra, edges", [(0, 0, 0), (1, 0, 1), (2, 0, 1), (0, 2, 2), (1, 2, 3), (2, 2, 3)])
def test_family_size_matches_brute_force(l, extra, edges):
    fam = enumerate_labeled(l, extra, edges)
    assert len(fam) == ref_family_size(l, extra, edges)
    assert all(G.l == l for G in fam)


def test_family_order_and_subfamily():
    fam = enumerate_labeled(1, 1, 2)
    keys = [(G.graph.n, G.graph.num_edges, G.graph.edges) for G in fam]
    assert keys == sorted(keys)
    sub = fam.subfamily([0, 2])
    assert list(sub) == [fam.graphs[0], fam.graphs[2]]


def test_family_caps():
    with pytest.raises(CapExceededError):
        enumerate_labeled(3, 3, 6, max_raw=1000)
    with pytest.raises(GraphError):
        enumerate_labeled(-1, 0, 0)


def test_glue_examples():
    a = LabeledGraph(Multigraph(2, [(0, 1)]), (0,))
    b = LabeledGraph(Multigraph(1, [(0, 0)]), (0,))
    assert glue_labeled(a, b) == Multigraph(2, [(0, 1), (0, 0)])
    with pytest.raises(GraphError):
        glue_labeled(a, LabeledGraph(Multigraph(2), (0, 1)))


def test_counterexample_small_slices():
    fam = enumerate_labeled(1, 0, 1)
    assert connection_slice(counterexample_oracle(), fam) == [[0, -2], [-2, 0]]
    S = connection_slice(counterexample_oracle(), enumerate_labeled(1, 2, 3))
    assert exact_rank(S) == ref_rank(S) <= 4


def test_unlabeled_slice_has_rank_one():
    """With no labels gluing is disjoint union, so a multiplicative f gives rank <= 1."""
    fam = enumerate_labeled(0, 2, 2)
    for f in (counterexample_oracle(), vertex_power_oracle(3)):
        assert exact_rank(connection_slice(f, fam)) <= 1


def test_vertex_power_slices_have_rank_one():
    for l in (1, 2):
        assert exact_rank(connection_slice(vertex_power_oracle(), enumerate_labeled(l, 1, 2))) == 1


@given(st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_slices_are_symmetric(l, seed):
    fam = enumerate_labeled(l, 1, 2)
    S = connection_slice(model_oracle(random_model(random.Random(seed), 2, 10)), fam)
    assert all(S[i][j] == S[j][i] for i in range(len(S)) for j in range(len(S)))


@given(st.integers(0, 2**32 - 1), st.data())
def test_principal_submatrix_rank_is_monotone(seed, data):
    fam = enumerate_labeled(1, 1, 2)
    y = random_model(random.Random(seed), 2, 8)
    idx = sorted(data.draw(st.sets(st.integers(0, len(fam) - 1), min_size=1)))
    full = exact_rank(connection_slice(model_oracle(y), fam))
    assert exact_rank(connection_slice(model_oracle(y), fam.subfamily(idx))) <= full


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("l", [0, 1, 2])
def test_rank_bound_for_rank_r_models(r, l):
    fam = enumerate_labeled(l, 1, 2)
    for seed in range(3):
        y = random_rank_r_model(random.Random(seed), 2, r, 12)
        rank, bound, ok = rank_bound_check(y, r, l, fam)
        assert ok and bound == r**l
        assert rank == ref_rank(connection_slice(model_oracle(y), fam))


def test_rank_bound_checks_label_count():
    with pytest.raises(GraphError):
        rank_bound_check(random_rank_r_model(random.Random(0), 1, 1, 4), 1, 2, enumerate_labeled(1, 0, 1))
