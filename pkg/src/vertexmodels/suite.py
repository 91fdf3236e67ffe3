"""Reproducible battery of property checks, run at a named scale.

Every check draws from its own ``random.Random`` (Mersenne Twister) seeded with
``"<seed>:<check name>"``, so a check's instances do not depend on which other
checks ran. Reports contain no timings and list checks sorted by name, which
makes them byte-identical for the same seed and scale.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import certify, connection, graphs, models, partition, scalars, symbolic
from .graphs import DirectedMultigraph, Multigraph, PinMap
from .scalars import GAUSSIAN, RATIONAL, Gaussian

SCALES = ("smoke", "desk")

# per-scale sizes; "n" and "e" bound the exhaustive graph enumerations
PARAMS = {
    "smoke": {
        "engine": 40, "mult": 20, "sign": 10,
        "thm1": {"n": 3, "e": 3, "models": 1},
        "thm2": {"n": 4, "e": 3, "models": 1},
        "thm3": {"n": 3, "e": 3, "models": 1},
        "thm4": {"n": 4, "e": 3, "models": 1},
        "pendant": 20, "hom": 20, "eval": 30,
        "kernel": {"n": 3, "e": 2}, "diagram": {"n": 2, "deg": 3},
        "conn": {"extra": 1, "edges": 2, "l": 1}, "moment_d": 2,
        "iso": 30,
    },
    "desk": {
        "engine": 500, "mult": 200, "sign": 50,
        "thm1": {"n": 5, "e": 6, "models": 1},
        "thm2": {"n": 5, "e": 6, "models": 1},
        "thm3": {"n": 4, "e": 5, "models": 2},
        "thm4": {"n": 5, "e": 5, "models": 1},
        "pendant": 200, "hom": 100, "eval": 200,
        "kernel": {"n": 4, "e": 4}, "diagram": {"n": 3, "deg": 4},
        "conn": {"extra": 2, "edges": 3, "l": 2}, "moment_d": 3,
        "iso": 300,
    },
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class RunReport:
    command: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(not c.passed for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "checks": [c.to_json() for c in self.checks],
            "passed": len(self.checks) - self.failed,
            "failed": self.failed,
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        lines = [self.command]
        lines.append("config: " + " ".join(f"{k}={v}" for k, v in sorted(self.config.items())))
        for c in self.checks:
            lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
            if c.witness is not None:
                lines.append("  witness: " + json.dumps(c.witness, sort_keys=True))
        lines.append(f"summary: {len(self.checks) - self.failed} passed, {self.failed} failed")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Random instances


def random_graph(rng: random.Random, max_n: int, max_e: int, min_n: int = 1, directed: bool = False):
    n = rng.randint(min_n, max_n)
    m = rng.randint(0, max_e) if n else 0
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
    return DirectedMultigraph(n, edges) if directed else Multigraph(n, edges)


def _random_small_model(rng: random.Random, k: int, cap: int, ring: str, directed: bool = False):
    return models.random_model(rng, k, cap, ring, span=3, denominators=(1, 2, 3), density=0.8,
                               directed=directed)


# --------------------------------------------------------------------------
# Checks


def _engine_equivalence(rng, p, ctx):
    count = 0
    for _ in range(p["engine"]):
        ring = rng.choice([RATIONAL, GAUSSIAN])
        k = rng.randint(0, 3)
        G = random_graph(rng, 6, 8)
        y = _random_small_model(rng, k, 16, ring)
        a = partition.partition_contract(G, y, max_width=ctx["cap_width"])
        b = partition.partition_brute(G, y, cap_edges=None)
        if ctx["inject_fault"] and count == 0:
            # deliberately corrupt one reference value so the check must fail
            b = b + 1
        if a != b:
            return False, f"mismatch after {count} instances", {
                "graph": graphs.graph_to_json(G), "contract": scalars.format_scalar(a),
                "brute": scalars.format_scalar(b)}
        count += 1
    return True, f"{count} instances agree", None


def _multiplicativity(rng, p, ctx):
    for i in range(p["mult"]):
        ring = rng.choice([RATIONAL, GAUSSIAN])
        y = _random_small_model(rng, rng.randint(1, 3), 16, ring)
        G, H = random_graph(rng, 3, 4), random_graph(rng, 3, 4)
        fG, fH, fGH = partition.multiplicativity_witness(G, H, y)
        if fGH != fG * fH:
            return False, f"pair {i} fails", {"G": graphs.graph_to_json(G), "H": graphs.graph_to_json(H)}
    return True, f"{p['mult']} pairs", None


def _sign_model(rng, p, ctx):
    y = models.model_from_function(1, lambda a: Gaussian(0, 1) ** a[0], 16, GAUSSIAN)
    for i in range(p["sign"]):
        G = random_graph(rng, 6, 8)
        if partition.partition_contract(G, y) != Gaussian(-1) ** G.num_edges:
            return False, f"graph {i} differs from (-1)^|E|", {"graph": graphs.graph_to_json(G)}
    return True, f"{p['sign']} graphs", None


def _exhaustive(rng, p, usize_of: Callable, mode: str, directed: bool, ranks: bool):
    total = 0
    configs = [(k, r) for k in (1, 2, 3) for r in (1, 2)] if ranks else [(k, None) for k in (1, 2)]
    for k, r in configs:
        usize = usize_of(k, r)
        min_n = usize + 1 if mode == "contract" else usize
        gs = graphs.enumerate_graphs(p["n"], p["e"], directed=directed, min_n=min_n)
        for _ in range(p["models"]):
            if ranks:
                y = models.random_rank_r_model(rng, k, r, 2 * p["e"] + 2, directed=directed)
            else:
                y = _random_small_model(rng, k, 2 * p["e"] + 2 * usize, RATIONAL, directed)
            f = certify.model_oracle(y)
            for G in gs:
                s = certify.sweep(f, G, usize, mode)
                total += len(s)
                bad = s.nonzero()
                if bad:
                    return False, f"violation for k={k}", bad[0].to_json()
    return True, f"{total} sums vanish", None


def _thm1(rng, p, ctx):
    return _exhaustive(rng, p["thm1"], lambda k, r: k + 1, "pins", False, False)


def _thm2(rng, p, ctx):
    return _exhaustive(rng, p["thm2"], lambda k, r: r + 1, "contract", False, True)


def _thm3(rng, p, ctx):
    return _exhaustive(rng, p["thm3"], lambda k, r: k + 1, "pins", True, False)


def _thm4(rng, p, ctx):
    return _exhaustive(rng, p["thm4"], lambda k, r: r + 1, "contract", True, True)


def _pendant(rng, p, ctx):
    for i in range(p["pendant"]):
        directed = rng.random() < 0.5
        k = rng.randint(1, 2)
        G = random_graph(rng, 4, 4, min_n=2, directed=directed)
        usize = rng.randint(1, min(3, G.n))
        U = tuple(sorted(rng.sample(range(G.n), usize)))
        s = tuple(rng.randrange(G.n) for _ in U)
        y = _random_small_model(rng, k, 12, rng.choice([RATIONAL, GAUSSIAN]), directed)
        a, b = certify.thm2_implies_thm1_check(certify.model_oracle(y), G, PinMap(U, s))
        if a != b:
            return False, f"instance {i} differs", {"graph": graphs.graph_to_json(G), "U": list(U), "s": list(s)}
    return True, f"{p['pendant']} instances agree", None


def _counterexample_mult(rng, p, ctx):
    f = certify.counterexample_oracle()
    pairs = []
    for _ in range(max(50, p["mult"] // 4)):
        pairs.append((random_graph(rng, 4, 4, min_n=0), random_graph(rng, 4, 4, min_n=0)))
    pairs.append((graphs.cycle_graph(3), graphs.cycle_graph(1)))
    ok = certify.check_multiplicative(f, pairs)
    return ok, f"{len(pairs)} pairs", None


def _counterexample_witness(rng, p, ctx):
    w = certify.search_violation(certify.counterexample_oracle(), 2, 4)
    if w is None or not w.value:
        return False, "no witness found", None
    return True, f"nonzero sum {scalars.format_scalar(w.value)}", w.to_json()


def _moment_rank(rng, p, ctx):
    checked = 0
    for r in (1, 2, 3):
        for k in (1, 2, 3):
            y = models.random_rank_r_model(rng, k, r, 2 * p["moment_d"])
            for d in range(p["moment_d"] + 1):
                rank = models.exact_rank(models.moment_slice(y, d))
                if rank > r:
                    return False, f"rank {rank} > {r} at k={k}, d={d}", None
                checked += 1
    y = models.model_from_function(1, lambda a: 1 + 2 ** a[0], 4)
    if models.exact_rank(models.moment_slice(y, 2)) != 2:
        return False, "1 + 2^d should have moment rank 2", None
    return True, f"{checked} slices within bound", None


def _connection_rank(rng, p, ctx):
    c = p["conn"]
    lines = []
    for r in (1, 2):
        for l in range(c["l"] + 1):
            fam = connection.enumerate_labeled(l, c["extra"], c["edges"])
            y = models.random_rank_r_model(rng, 2, r, 4 * c["edges"] + 4)
            res = connection.rank_bound_check(y, r, l, fam)
            lines.append(f"r={r},l={l}:{res.rank}/{res.bound}")
            if not res.ok:
                return False, " ".join(lines), None
    return True, " ".join(lines), None


def _connection_counterexample(rng, p, ctx):
    fam = connection.enumerate_labeled(1, 2, 3)
    S = connection.connection_slice(certify.counterexample_oracle(), fam)
    rank = models.exact_rank(S)
    symmetric = all(S[i][j] == S[j][i] for i in range(len(S)) for j in range(len(S)))
    return rank <= 4 and symmetric, f"family {len(fam)}, rank {rank} (bound 4)", None


def _symbolic_hom(rng, p, ctx):
    for i in range(p["hom"]):
        k = rng.randint(1, 2)
        G, H = random_graph(rng, 3, 3, min_n=0), random_graph(rng, 3, 3, min_n=0)
        if symbolic.p_poly(graphs.disjoint_union(G, H), k) != symbolic.p_poly(G, k) * symbolic.p_poly(H, k):
            return False, f"pair {i} fails", None
    return True, f"{p['hom']} pairs", None


def _symbolic_eval(rng, p, ctx):
    for i in range(p["eval"]):
        k = rng.randint(0, 3)
        G = random_graph(rng, 4, 5)
        y = _random_small_model(rng, k, 10, rng.choice([RATIONAL, GAUSSIAN]))
        if symbolic.p_poly(G, k).evaluate(y) != partition.partition_brute(G, y):
            return False, f"instance {i} differs", {"graph": graphs.graph_to_json(G)}
    return True, f"{p['eval']} instances", None


def _symbolic_kernel(rng, p, ctx):
    count = 0
    for G in graphs.enumerate_graphs(p["kernel"]["n"], p["kernel"]["e"], min_n=2):
        for U in itertools.combinations(range(G.n), 2):
            for s in itertools.product(range(G.n), repeat=2):
                q = symbolic.kernel_generator_pins(G, PinMap(U, s))
                if not symbolic.p_quantum(q, 1).is_zero():
                    return False, "nonzero image", {"graph": graphs.graph_to_json(G), "U": list(U), "s": list(s)}
                count += 1
    return True, f"{count} generators map to 0", None


def _symbolic_diagram(rng, p, ctx):
    count = 0
    for k in (1, 2):
        for n in range(1, p["diagram"]["n"] + 1):
            for q in symbolic.x_monomials(n, p["diagram"]["deg"]):
                if not symbolic.diagram_check(q, k, n):
                    return False, f"fails for {q.to_text()} k={k} n={n}", None
                count += 1
    return True, f"{count} monomials commute", None


def _iso_invariance(rng, p, ctx):
    for i in range(p["iso"]):
        directed = rng.random() < 0.5
        G = random_graph(rng, 6, 8, directed=directed)
        perm = list(range(G.n))
        rng.shuffle(perm)
        H = type(G)(G.n, [(perm[u], perm[v]) for u, v in G.edges])
        if graphs.canonical(G) != graphs.canonical(H):
            return False, f"relabelling {i} changes the canonical form", {"graph": graphs.graph_to_json(G)}
        if not directed:
            q1 = symbolic.QuantumGraph.from_terms([(G, 2), (H, -1)])
            q2 = symbolic.QuantumGraph.from_terms([(H, 1)])
            if q1 != q2:
                return False, f"quantum graph {i} depends on labels", None
    return True, f"{p['iso']} relabellings", None


CHECKS: dict[str, Callable] = {
    "certify.counterexample_multiplicative": _counterexample_mult,
    "certify.counterexample_witness": _counterexample_witness,
    "certify.pendant_reduction": _pendant,
    "certify.pins_identity": _thm1,
    "certify.contract_identity": _thm2,
    "certify.directed_pins_identity": _thm3,
    "certify.directed_contract_identity": _thm4,
    "connection.counterexample_slice": _connection_counterexample,
    "connection.rank_bound": _connection_rank,
    "graphs.isomorphism_invariance": _iso_invariance,
    "models.moment_rank": _moment_rank,
    "partition.engine_equivalence": _engine_equivalence,
    "partition.multiplicativity": _multiplicativity,
    "partition.sign_model": _sign_model,
    "symbolic.diagram": _symbolic_diagram,
    "symbolic.evaluation": _symbolic_eval,
    "symbolic.homomorphism": _symbolic_hom,
    "symbolic.kernel_pins": _symbolic_kernel,
}


def run_suite(scale: str, seed: int, inject_fault: bool = False, cap_width: int = partition.DEFAULT_WIDTH_CAP,
              only: Optional[list] = None) -> RunReport:
    if scale not in PARAMS:
        raise ValueError(f"unknown scale {scale!r}; choose from {', '.join(SCALES)}")
    command = f"suite --scale {scale} --seed {seed}" + (" --inject-fault" if inject_fault else "")
    config = {"scale": scale, "seed": seed, "cap_width": cap_width, "prng": "MT19937"}
    report = RunReport(command, config)
    ctx = {"inject_fault": inject_fault, "cap_width": cap_width}
    for name in sorted(CHECKS):
        if only is not None and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        passed, detail, witness = CHECKS[name](rng, PARAMS[scale], ctx)
        report.checks.append(CheckResult(name, bool(passed), detail, witness))
    return report
