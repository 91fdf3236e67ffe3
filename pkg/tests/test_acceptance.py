"""Acceptance battery: every check is exact, with zero tolerance.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import random
import shutil
import subprocess
import sys
import time

import pytest

from oracles import as_pair, model_table, ref_counterexample, ref_matchings, ref_partition, ref_rank
from vertexmodels import certify, connection, graphs, models, symbolic
from vertexmodels.graphs import PinMap, disjoint_union, enumerate_graphs
from vertexmodels.partition import multiplicativity_witness, partition_batch, partition_brute, partition_contract
from vertexmodels.scalars import GAUSSIAN, RATIONAL, Gaussian
from vertexmodels.suite import random_graph

MODELS_PER_K = 5
RANK_MODELS_UNDIRECTED = 5
RANK_MODELS_DIRECTED = 2


def rng_for(n: int) -> random.Random:
    return random.Random(f"acceptance:{n}")


def small_model(rng, k, cap, ring=RATIONAL, directed=False):
    return models.random_model(rng, k, cap, ring, span=3, denominators=(1, 2, 3), density=0.8, directed=directed)


def exhaustive_sweep(f, usize, mode, directed, max_n=5, max_e=6):
    """Number of alternating sums checked and the nonzero ones, over every
    canonical graph and every (U, s)."""
    total, bad = 0, []
    for G in enumerate_graphs(max_n, max_e, directed=directed, min_n=usize):
        S = certify.sweep(f, G, usize, mode)
        total += len(S)
        bad.extend(S.nonzero())
    return total, bad


# --------------------------------------------------------------------------


@pytest.mark.criterion(1, "engine equivalence (contract = brute, >= 500 instances)")
def test_criterion_1_engine_equivalence():
    rng = rng_for(1)
    for i in range(500):
        k = rng.randint(1, 3)
        ring = rng.choice([RATIONAL, GAUSSIAN])
        G = random_graph(rng, 6, 8, min_n=0)
        y = small_model(rng, k, 16, ring)
        brute = partition_brute(G, y)
        assert partition_contract(G, y) == brute, (i, G)
        if i % 5 == 0:
            assert as_pair(brute) == ref_partition(G.n, list(G.edges), model_table(y), k)
            assert partition_batch([G], y)[0] == brute


@pytest.mark.criterion(2, "multiplicativity on >= 200 pairs, matching and sign models")
def test_criterion_2_multiplicativity():
    rng = rng_for(2)
    for _ in range(200):
        G, H = random_graph(rng, 4, 5, min_n=0), random_graph(rng, 4, 5, min_n=0)
        y = small_model(rng, rng.randint(1, 3), 12, rng.choice([RATIONAL, GAUSSIAN]))
        a, b, ab = multiplicativity_witness(G, H, y)
        assert ab == a * b
    matching = models.model_from_function(2, lambda a: 1 if a[1] <= 1 else 0, 16)
    sign = models.model_from_function(1, lambda a: Gaussian(0, 1) ** a[0], 20, GAUSSIAN)
    for _ in range(60):
        G, H = random_graph(rng, 4, 5, min_n=0), random_graph(rng, 4, 5, min_n=0)
        U = disjoint_union(G, H)
        assert partition_contract(U, matching) == ref_matchings(U.n, list(U.edges))
        assert partition_contract(U, matching) == partition_contract(G, matching) * partition_contract(H, matching)
        assert partition_contract(U, sign) == (-1) ** U.num_edges
        assert partition_brute(G, sign) == (-1) ** G.num_edges


@pytest.mark.criterion(3, "pins identity, exhaustive n <= 5, |E| <= 6, |U| = k + 1")
def test_criterion_3_pins_identity():
    rng = rng_for(3)
    for k in (1, 2):
        for _ in range(MODELS_PER_K):
            y = small_model(rng, k, 16, rng.choice([RATIONAL, GAUSSIAN]))
            total, bad = exhaustive_sweep(certify.model_oracle(y), k + 1, "pins", directed=False)
            assert total > 0 and bad == [], bad[:1]


@pytest.mark.criterion(4, "contraction identity for rank-r models, pendant reduction")
def test_criterion_4_contract_identity():
    rng = rng_for(4)
    for r in (1, 2):
        for k in (1, 2, 3):
            for _ in range(RANK_MODELS_UNDIRECTED):
                y = models.random_rank_r_model(rng, k, r, 16)
                total, bad = exhaustive_sweep(certify.model_oracle(y), r + 1, "contract", directed=False)
                assert total > 0 and bad == [], bad[:1]
    for i in range(200):
        G = random_graph(rng, 4, 5, min_n=1)
        usize = rng.randint(1, min(3, G.n))
        U = tuple(sorted(rng.sample(range(G.n), usize)))
        s = tuple(rng.randrange(G.n) for _ in U)
        f = certify.model_oracle(small_model(rng, rng.randint(1, 2), 14, rng.choice([RATIONAL, GAUSSIAN])))
        a, b = certify.thm2_implies_thm1_check(f, G, PinMap(U, s))
        assert a == b, i


@pytest.mark.criterion(5, "counterexample: multiplicative, witness, connection rank <= 4")
def test_criterion_5_counterexample():
    rng = rng_for(5)
    f = certify.counterexample_oracle()
    pairs = [(random_graph(rng, 4, 4, min_n=0), random_graph(rng, 4, 4, min_n=0)) for _ in range(60)]
    pairs += [(graphs.cycle_graph(3), graphs.cycle_graph(1)), (graphs.cycle_graph(2), graphs.cycle_graph(4))]
    assert certify.check_multiplicative(f, pairs)
    w = certify.search_violation(f, 2, 4)
    assert w is not None and w.value != 0
    # recompute the witness sum with the reference counterexample
    G, (u1, u2), (s1, s2) = w.graph, w.U, w.s
    plus = ref_counterexample(G.n, list(G.edges) + [(u1, s1), (u2, s2)])
    minus = ref_counterexample(G.n, list(G.edges) + [(u1, s2), (u2, s1)])
    assert plus - minus == w.value
    fam = connection.enumerate_labeled(1, 2, 3)
    S = connection.connection_slice(f, fam)
    assert models.exact_rank(S) == ref_rank(S) <= 4


@pytest.mark.criterion(6, "moment and connection rank bounds")
def test_criterion_6_rank_bounds():
    rng = rng_for(6)
    for r in (1, 2, 3):
        for k in (1, 2, 3):
            for _ in range(3):
                y = models.random_rank_r_model(rng, k, r, 6)
                for d in range(4):
                    assert models.exact_rank(models.moment_slice(y, d)) <= r
    for r in (1, 2):
        for l in (0, 1, 2):
            fam = connection.enumerate_labeled(l, 2, 3)
            for _ in range(2):
                y = models.random_rank_r_model(rng, 2, r, 16)
                assert connection.rank_bound_check(y, r, l, fam).ok
    y = models.model_from_function(1, lambda a: 1 + 2 ** a[0], 4)
    M = models.moment_slice(y, 2)
    assert M.matrix == ((2, 3, 5), (3, 5, 9), (5, 9, 17))
    assert models.exact_rank(M) == 2 == ref_rank(M.matrix)


@pytest.mark.criterion(7, "symbolic layer: homomorphism, evaluation, kernel, diagram")
def test_criterion_7_symbolic():
    rng = rng_for(7)
    for _ in range(100):
        k = rng.randint(1, 2)
        G, H = random_graph(rng, 3, 3, min_n=0), random_graph(rng, 3, 3, min_n=0)
        assert symbolic.p_poly(disjoint_union(G, H), k) == symbolic.p_poly(G, k) * symbolic.p_poly(H, k)
    for _ in range(200):
        k = rng.randint(0, 3)
        G = random_graph(rng, 4, 5)
        y = small_model(rng, k, 10, rng.choice([RATIONAL, GAUSSIAN]))
        assert symbolic.p_poly(G, k).evaluate(y) == partition_brute(G, y)
    generators = 0
    for G in enumerate_graphs(4, 4, min_n=2):
        for U in itertools.combinations(range(G.n), 2):
            for s in itertools.product(range(G.n), repeat=2):
                assert symbolic.p_quantum(symbolic.kernel_generator_pins(G, PinMap(U, s)), 1).is_zero()
                generators += 1
    assert generators > 0
    for k in (1, 2):
        for n in (1, 2, 3):
            for q in symbolic.x_monomials(n, 4):
                assert symbolic.diagram_check(q, k, n), (q.to_text(), k, n)


@pytest.mark.criterion(8, "directed analogues of criteria 3 and 4")
def test_criterion_8_directed():
    rng = rng_for(8)
    for k in (1, 2):
        for _ in range(MODELS_PER_K):
            y = small_model(rng, k, 16, rng.choice([RATIONAL, GAUSSIAN]), directed=True)
            total, bad = exhaustive_sweep(certify.model_oracle(y), k + 1, "pins", directed=True)
            assert total > 0 and bad == [], bad[:1]
    for r in (1, 2):
        for k in (1, 2, 3):
            for _ in range(RANK_MODELS_DIRECTED):
                y = models.random_rank_r_model(rng, k, r, 16, directed=True)
                total, bad = exhaustive_sweep(certify.model_oracle(y), r + 1, "contract", directed=True)
                assert total > 0 and bad == [], bad[:1]
    for _ in range(100):
        G = random_graph(rng, 4, 4, min_n=1, directed=True)
        usize = rng.randint(1, min(3, G.n))
        U = tuple(sorted(rng.sample(range(G.n), usize)))
        s = tuple(rng.randrange(G.n) for _ in U)
        f = certify.model_oracle(small_model(rng, 1, 12, directed=True))
        a, b = certify.thm2_implies_thm1_check(f, G, PinMap(U, s))
        assert a == b


@pytest.mark.criterion(9, "desk suite is byte-identical across runs and under 10 minutes")
def test_criterion_9_determinism():
    if shutil.which("vertexmodels"):
        cmd = ["vertexmodels"]
    else:
        cmd = [sys.executable, "-c", "import sys; from vertexmodels.cli import main; sys.exit(main())"]
    cmd += ["suite", "--scale", "desk", "--seed", "2026"]
    outputs = []
    for _ in range(2):
        start = time.perf_counter()
        done = subprocess.run(cmd, capture_output=True, timeout=900)
        elapsed = time.perf_counter() - start
        assert done.returncode == 0, done.stdout.decode()[-2000:]
        assert elapsed < 600
        outputs.append(done.stdout)
    assert outputs[0] == outputs[1]
    assert b"summary: 18 passed, 0 failed" in outputs[0]
