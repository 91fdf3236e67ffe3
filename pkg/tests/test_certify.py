import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import multigraphs
from oracles import ref_counterexample, ref_sign
from vertexmodels.certify import (
    alt_sum_contract,
    alt_sum_pins,
    check_multiplicative,
    counterexample_f,
    counterexample_oracle,
    directed_alt_sum_contract,
    directed_alt_sum_pins,
    function_oracle,
    loop_power_oracle,
    model_oracle,
    permutation_sign,
    search_violation,
    signed_permutations,
    sweep,
    table_oracle,
    thm2_implies_thm1_check,
    vertex_power_oracle,
)
from vertexmodels.errors import CapExceededError, OutsideTableError, PinMapError
from vertexmodels.graphs import DirectedMultigraph, Multigraph, PinMap, cycle_graph, disjoint_union, path_graph
from vertexmodels.models import random_model, random_rank_r_model


def _pin_maps(G, usize, disjoint):
    for U in itertools.combinations(range(G.n), usize):
        targets = [v for v in range(G.n) if not (disjoint and v in U)]
        for s in itertools.product(targets, repeat=usize):
            yield PinMap(U, s)


# --------------------------------------------------------------------------
# The counterexample parameter


def test_counterexample_values():
    f = counterexample_oracle()
    assert f(Multigraph(0)) == 1
    assert f(cycle_graph(3)) == -2
    assert f(disjoint_union(cycle_graph(3), cycle_graph(2))) == 4
    assert f(path_graph(3)) == 0
    assert f(Multigraph(1, [(0, 0)])) == -2
    assert f(Multigraph(1)) == 0


@given(multigraphs(max_n=6, max_e=7))
def test_counterexample_matches_oracle(G):
    assert counterexample_f(G) == ref_counterexample(G.n, list(G.edges))


@given(st.lists(st.tuples(multigraphs(max_n=4, max_e=4), multigraphs(max_n=4, max_e=4)), max_size=8))
def test_counterexample_is_multiplicative(pairs):
    assert check_multiplicative(counterexample_oracle(), pairs)


def test_counterexample_has_witness():
    w = search_violation(counterexample_oracle(), 2, 4)
    assert w is not None and w.value != 0
    p = PinMap(w.U, w.s)
    assert alt_sum_pins(counterexample_oracle(), w.graph, p) == w.value
    assert w.to_json()["mode"] == "pins"


def test_check_multiplicative_needs_unit_on_empty():
    doubled = function_oracle(lambda G: Fraction(2), "two")
    assert not check_multiplicative(doubled, [])
    edges = function_oracle(lambda G: Fraction(G.num_edges), "edges")
    assert not check_multiplicative(edges, [(path_graph(2), path_graph(2))])


# --------------------------------------------------------------------------
# Hand examples


def test_constant_s_gives_zero():
    G = path_graph(4)
    f = counterexample_oracle()
    for t in range(4):
        assert alt_sum_pins(f, G, PinMap((0, 2), (t, t))) == 0


def test_vertex_power_contract_and_overlap():
    f = vertex_power_oracle()
    G = path_graph(3)
    assert alt_sum_contract(f, G, PinMap((0, 1), (2, 2))) == 0
    with pytest.raises(PinMapError):
        alt_sum_contract(f, G, PinMap((0, 1), (1, 2)))
    # overlapping s changes the number of merged classes between terms
    assert alt_sum_contract(f, G, PinMap((0, 1), (1, 2)), allow_overlap=True) == -2


def test_loop_power_identity_depends_on_overlap():
    f = loop_power_oracle()
    G = Multigraph(3)
    assert alt_sum_pins(f, G, PinMap((0, 1), (2, 2))) == 0
    assert alt_sum_pins(f, G, PinMap((0, 1), (0, 1))) == 3


def test_table_oracle_lookup_and_miss():
    f = table_oracle({path_graph(2): "3/1", Multigraph(1): 5})
    assert f(Multigraph(2, [(1, 0)])) == 3
    assert f(Multigraph(1)) == 5
    with pytest.raises(OutsideTableError):
        f(path_graph(3))


def test_oracle_kind_checked():
    with pytest.raises(TypeError):
        counterexample_oracle()(DirectedMultigraph(1))


def test_cap_usize():
    with pytest.raises(CapExceededError):
        alt_sum_pins(vertex_power_oracle(), Multigraph(4), PinMap((0, 1, 2), (3, 3, 3)), cap_usize=2)
    with pytest.raises(CapExceededError):
        sweep(vertex_power_oracle(), Multigraph(4), 3, cap_usize=2)


def test_empty_pin_map():
    f = counterexample_oracle()
    assert alt_sum_pins(f, cycle_graph(3), PinMap()) == -2


# --------------------------------------------------------------------------
# Permutation signs


@pytest.mark.parametrize("r", range(6))
def test_permutation_sign_matches_inversions(r):
    perms = signed_permutations(r)
    assert len(perms) == len(list(itertools.permutations(range(r))))
    for perm, sign in perms:
        assert sign == ref_sign(perm) == permutation_sign(perm)


# --------------------------------------------------------------------------
# The identities on random models


@given(multigraphs(max_n=4, max_e=4, min_n=2), st.integers(1, 2), st.integers(0, 2**32 - 1), st.data())
def test_pins_identity_holds(G, k, seed, data):
    if G.n < k + 1:
        return
    y = random_model(random.Random(seed), k, 12, denominators=(1, 2))
    U = tuple(sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=k + 1, max_size=k + 1))))
    s = tuple(data.draw(st.integers(0, G.n - 1)) for _ in U)
    assert alt_sum_pins(model_oracle(y), G, PinMap(U, s)) == 0


@given(multigraphs(max_n=5, max_e=5, min_n=3), st.integers(1, 2), st.integers(1, 2), st.integers(0, 2**32 - 1),
       st.data())
def test_contract_identity_holds_for_rank_r(G, r, k, seed, data):
    if G.n < r + 2:
        return
    y = random_rank_r_model(random.Random(seed), k, r, 14)
    U = tuple(sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=r + 1, max_size=r + 1))))
    rest = [v for v in range(G.n) if v not in U]
    s = tuple(data.draw(st.sampled_from(rest)) for _ in U)
    assert alt_sum_contract(model_oracle(y), G, PinMap(U, s)) == 0


@given(multigraphs(max_n=4, max_e=4, min_n=2, directed=True), st.integers(0, 2**32 - 1), st.data())
def test_directed_identities_hold(G, seed, data):
    rng = random.Random(seed)
    y = random_model(rng, 1, 10, directed=True)
    U = tuple(sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=2, max_size=2))))
    s = tuple(data.draw(st.integers(0, G.n - 1)) for _ in U)
    assert directed_alt_sum_pins(model_oracle(y), G, PinMap(U, s)) == 0
    if G.n >= 3:
        rest = [v for v in range(G.n) if v not in U]
        s = tuple(data.draw(st.sampled_from(rest)) for _ in U)
        z = random_rank_r_model(rng, 1, 1, 10, directed=True)
        assert directed_alt_sum_contract(model_oracle(z), G, PinMap(U, s)) == 0


def test_too_few_colours_can_fail():
    """With |U| = k the pins sum is generally nonzero."""
    y = random_model(random.Random(5), 1, 8, density=1.0)
    assert alt_sum_pins(model_oracle(y), path_graph(2), PinMap((0,), (1,))) != 0


# --------------------------------------------------------------------------
# Structural properties of alternating sums


@given(multigraphs(max_n=4, max_e=4, min_n=3), st.integers(0, 2**32 - 1), st.data())
def test_alternating_under_transposition(G, seed, data):
    y = random_model(random.Random(seed), 2, 10)
    U = tuple(sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=2, max_size=2))))
    s = tuple(data.draw(st.integers(0, G.n - 1)) for _ in U)
    f = function_oracle(lambda H: counterexample_f(H) + H.num_edges, "mixed")
    assert alt_sum_pins(f, G, PinMap(U, s[::-1])) == -alt_sum_pins(f, G, PinMap(U, s))
    assert alt_sum_pins(model_oracle(y), G, PinMap(U, s[::-1])) == -alt_sum_pins(model_oracle(y), G, PinMap(U, s))


@given(multigraphs(max_n=4, max_e=4, min_n=1), st.integers(0, 2**32 - 1), st.data())
def test_pendant_reduction_agrees(G, seed, data):
    usize = data.draw(st.integers(1, min(3, G.n)))
    U = tuple(sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=usize, max_size=usize))))
    s = tuple(data.draw(st.integers(0, G.n - 1)) for _ in U)
    for f in (counterexample_oracle(), model_oracle(random_model(random.Random(seed), 2, 12, "gaussian"))):
        a, b = thm2_implies_thm1_check(f, G, PinMap(U, s))
        assert a == b


def test_sweep_matches_single_sums():
    G = Multigraph(4, [(0, 1), (1, 2), (2, 3), (3, 3)])
    y = random_model(random.Random(9), 1, 10, "gaussian", denominators=(1, 3))
    for f in (model_oracle(y), counterexample_oracle()):
        for mode, single, disjoint in (("pins", alt_sum_pins, False), ("contract", alt_sum_contract, True)):
            S = sweep(f, G, 2, mode)
            items = list(S.items())
            assert [p for p, _ in items] == list(_pin_maps(G, 2, disjoint))
            for p, v in items:
                assert v == single(f, G, p)
            assert len(S) == len(items)


def test_sweep_overlap_matches_single_sums():
    G = path_graph(3)
    f = vertex_power_oracle()
    for p, v in sweep(f, G, 2, "contract", allow_overlap=True).items():
        assert v == alt_sum_contract(f, G, p, allow_overlap=True)


def test_sweep_directed_model():
    G = DirectedMultigraph(3, [(0, 1), (1, 2), (2, 0)])
    y = random_model(random.Random(2), 1, 8, directed=True)
    f = model_oracle(y)
    for p, v in sweep(f, G, 1, "pins").items():
        assert v == directed_alt_sum_pins(f, G, p)
    assert sweep(f, G, 2, "pins").nonzero() == []


def test_sweep_nonzero_lists_witnesses():
    G = search_violation(counterexample_oracle(), 2, 4).graph
    S = sweep(counterexample_oracle(), G, 2)
    found = S.nonzero()
    assert found and all(w.value != 0 for w in found)
    assert len(found) == sum(1 for _, v in S.items() if v != 0)


def test_search_finds_nothing_for_models():
    y = random_model(random.Random(1), 2, 12)
    assert search_violation(model_oracle(y), 3, 3, 3) is None
