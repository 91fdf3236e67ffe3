"""Alternating-sum identities that every vertex-model partition function obeys.

For a graph ``G``, pins ``U`` and a map ``s: U -> V`` the two sums are

    sum over pi in S_U of sgn(pi) * f(G_{s o pi})     (pins: an edge u--s(u) per u)
    sum over pi in S_U of sgn(pi) * f(G/{s o pi})     (contraction of those edges)

The first vanishes for any ``k``-colour model once ``|U| = k + 1``; the second
vanishes for models whose moment matrix has rank at most ``|U| - 1`` (and
``s(U)`` disjoint from ``U``). Graph parameters are passed in as
``ParamOracle`` handles so the same code checks model-induced functions,
closed formulas and finite tables.

``sweep`` evaluates every ``(U, s)`` for one graph at once: all the graphs
``G_t`` for maps ``t: U -> V`` are built as one array and, for model oracles,
evaluated by the compiled engine; each alternating sum is then a signed
gather over that table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from . import scalars
from .errors import CapExceededError, OutsideTableError, PinMapError
from .graphs import (
    DirectedMultigraph,
    Multigraph,
    PinMap,
    add_pins,
    canonical,
    contract_pins,
    directed_add_pins,
    directed_contract_pins,
    directed_disjoint_union,
    directed_pendant_reduction,
    disjoint_union,
    enumerate_graphs,
    graph_to_json,
    pendant_reduction,
)
from .models import DirectedVertexModel, VertexModel
from .partition import BatchValues, batch_evaluate, partition_batch

DEFAULT_USIZE_CAP = 6

MODEL = "model-induced"
COUNTEREXAMPLE = "builtin counterexample"
BUILTIN = "builtin"
TABLE = "table-backed"


# --------------------------------------------------------------------------
# Oracles


@dataclass(frozen=True, eq=False)
class ParamOracle:
    """A graph parameter ``f``; call it on a graph to get an exact scalar.

    ``model`` is set for model-induced oracles and lets sweeps use the batch engine.
    """

    fn: Callable
    tag: str
    directed: bool = False
    model: Optional[VertexModel] = None
    name: str = ""

    def __call__(self, G):
        if isinstance(G, DirectedMultigraph) != self.directed:
            kind = "directed" if self.directed else "undirected"
            raise TypeError(f"this oracle takes {kind} graphs")
        return self.fn(G)

    def many(self, graphs: Sequence) -> list:
        if self.model is not None:
            return partition_batch(graphs, self.model)
        return [self(G) for G in graphs]


def model_oracle(y: VertexModel, name: str = "") -> ParamOracle:
    directed = isinstance(y, DirectedVertexModel)
    return ParamOracle(lambda G: partition_batch([G], y)[0], MODEL, directed, y, name or "f_y")


def function_oracle(fn: Callable, name: str, directed: bool = False, tag: str = BUILTIN) -> ParamOracle:
    return ParamOracle(fn, tag, directed, None, name)


def table_oracle(table: Mapping, directed: bool = False, name: str = "table") -> ParamOracle:
    """Finite table ``graph -> value``; keys are canonicalized, lookups outside raise
    ``OutsideTableError``."""
    canon = {canonical(G): scalars.parse_scalar(v) if isinstance(v, (str, list)) else v
             for G, v in table.items()}

    def lookup(G):
        key = canonical(G)
        try:
            return canon[key]
        except KeyError:
            raise OutsideTableError(f"no table value for {key}") from None

    return ParamOracle(lookup, TABLE, directed, None, name)


def counterexample_f(G: Multigraph) -> Fraction:
    """``(-2)^(number of components)`` if every vertex has degree 2 (a loop counts
    twice), else 0. The empty graph is 2-regular with no components, so it gets 1."""
    if any(d != 2 for d in G.degrees()):
        return Fraction(0)
    return Fraction(-2) ** G.components()


def counterexample_oracle() -> ParamOracle:
    return function_oracle(counterexample_f, "counterexample", tag=COUNTEREXAMPLE)


def vertex_power_oracle(base: int = 2, directed: bool = False) -> ParamOracle:
    """``base^|V(G)|``: the partition function of the 1-colour model ``y == base``."""
    return function_oracle(lambda G: Fraction(base) ** G.n, f"{base}^|V|", directed)


def loop_power_oracle(base: int = 2) -> ParamOracle:
    """``base^(number of loops)``; not a partition function although it passes the
    pin identity whenever ``s(U)`` avoids ``U``."""
    return function_oracle(lambda G: Fraction(base) ** sum(G.loops()), f"{base}^loops")


BUILTIN_ORACLES = {
    "counterexample": counterexample_oracle,
    "vertex-power": vertex_power_oracle,
    "loop-power": loop_power_oracle,
}


# --------------------------------------------------------------------------
# Permutations


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def signed_permutations(r: int) -> list[tuple[tuple[int, ...], int]]:
    """All permutations of ``range(r)`` in lexicographic order with their signs."""
    return [(p, permutation_sign(p)) for p in itertools.permutations(range(r))]


# --------------------------------------------------------------------------
# Single alternating sums


def _alt_sum(f: ParamOracle, G, p: PinMap, surgery, cap_usize: Optional[int]):
    if cap_usize is not None and len(p) > cap_usize:
        raise CapExceededError(f"|U| = {len(p)} exceeds the cap {cap_usize}")
    perms = signed_permutations(len(p))
    terms = [surgery(G, p.permuted(perm)) for perm, _ in perms]
    values = f.many(terms)
    total = 0
    for (_, sign), v in zip(perms, values):
        total = total + sign * v
    return _as_scalar(total, values)


def _as_scalar(total, values):
    if isinstance(total, int):
        ring = scalars.ring_of(values[0]) if values else scalars.RATIONAL
        return scalars.coerce(total, ring)
    return total


def alt_sum_pins(f: ParamOracle, G: Multigraph, p: PinMap, cap_usize: Optional[int] = DEFAULT_USIZE_CAP):
    """``sum_pi sgn(pi) f(G_{s o pi})``; ``s(U)`` may meet ``U``."""
    p.check(G.n)
    return _alt_sum(f, G, p, add_pins, cap_usize)


def alt_sum_contract(f: ParamOracle, G: Multigraph, p: PinMap, cap_usize: Optional[int] = DEFAULT_USIZE_CAP,
                     allow_overlap: bool = False):
    """``sum_pi sgn(pi) f(G/{s o pi})``; requires ``s(U)`` disjoint from ``U`` unless
    ``allow_overlap`` (a probe, not part of the identity)."""
    p.check(G.n, disjoint=not allow_overlap)
    return _alt_sum(f, G, p, lambda H, q: contract_pins(H, q, allow_overlap), cap_usize)


def directed_alt_sum_pins(f: ParamOracle, G: DirectedMultigraph, p: PinMap,
                          cap_usize: Optional[int] = DEFAULT_USIZE_CAP):
    p.check(G.n)
    return _alt_sum(f, G, p, directed_add_pins, cap_usize)


def directed_alt_sum_contract(f: ParamOracle, G: DirectedMultigraph, p: PinMap,
                              cap_usize: Optional[int] = DEFAULT_USIZE_CAP, allow_overlap: bool = False):
    p.check(G.n, disjoint=not allow_overlap)
    return _alt_sum(f, G, p, lambda H, q: directed_contract_pins(H, q, allow_overlap), cap_usize)


def thm2_implies_thm1_check(f: ParamOracle, G, p: PinMap):
    """``(pin sum on G, contraction sum on the pendant reduction of G)``; the two agree
    term by term."""
    if isinstance(G, DirectedMultigraph):
        G2, p2 = directed_pendant_reduction(G, p)
        return directed_alt_sum_pins(f, G, p), directed_alt_sum_contract(f, G2, p2)
    G2, p2 = pendant_reduction(G, p)
    return alt_sum_pins(f, G, p), alt_sum_contract(f, G2, p2)


def check_multiplicative(f: ParamOracle, pairs: Iterable) -> bool:
    """``f(empty) = 1`` and ``f(G + H) = f(G) f(H)`` on every given pair."""
    if f.directed:
        empty, union = DirectedMultigraph(0), directed_disjoint_union
    else:
        empty, union = Multigraph(0), disjoint_union
    if f(empty) != 1:
        return False
    for G, H in pairs:
        if f(union(G, H)) != f(G) * f(H):
            return False
    return True


# --------------------------------------------------------------------------
# Sweeps over all (U, s) for one graph


@dataclass(frozen=True)
class Witness:
    graph: object
    U: tuple
    s: tuple
    value: object
    mode: str = "pins"

    def to_json(self) -> dict:
        return {
            "graph": graph_to_json(self.graph),
            "U": list(self.U),
            "s": list(self.s),
            "value": scalars.format_scalar(self.value),
            "mode": self.mode,
        }


@dataclass
class _Block:
    U: tuple
    targets: tuple
    values: BatchValues

    def pin(self, row: int) -> PinMap:
        r = len(self.U)
        base = len(self.targets)
        digits = []
        for _ in range(r):
            row, d = divmod(row, base)
            digits.append(self.targets[d])
        return PinMap(self.U, tuple(reversed(digits)))


@dataclass
class Sweep:
    """Every alternating sum for one graph, ``|U| = usize``, in lexicographic ``(U, s)`` order."""

    graph: object
    mode: str
    usize: int
    blocks: list = field(default_factory=list)

    def __len__(self):
        return sum(len(b.values) for b in self.blocks)

    def items(self) -> Iterator[tuple[PinMap, object]]:
        for b in self.blocks:
            for i in range(len(b.values)):
                yield b.pin(i), b.values.scalar(i)

    def nonzero(self) -> list[Witness]:
        out = []
        for b in self.blocks:
            v = b.values
            mask = np.asarray(v.re != 0, dtype=bool)
            if v.im is not None:
                mask |= np.asarray(v.im != 0, dtype=bool)
            for i in np.flatnonzero(mask):
                p = b.pin(int(i))
                out.append(Witness(self.graph, p.U, p.s, v.scalar(int(i)), self.mode))
        return out


class _ScalarValues(BatchValues):
    """Exact scalars held directly (``scale`` unused)."""

    def __init__(self, values: np.ndarray):
        super().__init__(values, None, 1, "scalar")

    def to_scalar(self, re, im=None):
        return re


def _map_digits(base: int, r: int) -> np.ndarray:
    """Rows of all maps ``[r] -> [base]`` in lexicographic order."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((base,) * r).reshape(r, -1).T
    return np.ascontiguousarray(grids.astype(np.int64))


def _term_arrays(G, U: tuple, targets: np.ndarray, digits: np.ndarray, mode: str):
    """Edge arrays of all term graphs ``G_t`` (or ``G/t``) for the maps in ``digits``."""
    T = digits.shape[0]
    n = G.n
    base = np.asarray(G.edges, dtype=np.int64).reshape(-1, 2)
    tvals = targets[digits] if digits.size else np.zeros((T, 0), dtype=np.int64)
    if mode == "pins":
        pins = np.stack([np.broadcast_to(np.asarray(U, dtype=np.int64), (T, len(U))), tvals], axis=2)
        edges = np.concatenate([np.broadcast_to(base, (T,) + base.shape), pins], axis=1)
        return np.ascontiguousarray(edges), n
    # contraction with s(U) disjoint from U: u is renamed to t(u), then V \ U is renumbered
    keep = [v for v in range(n) if v not in U]
    rank = np.full(n, -1, dtype=np.int64)
    rank[keep] = np.arange(len(keep))
    mapping = np.broadcast_to(rank, (T, n)).copy()
    if U:
        mapping[:, list(U)] = rank[tvals]
    rows = np.arange(T)[:, None]
    edges = np.stack([mapping[rows, base[:, 0][None, :]], mapping[rows, base[:, 1][None, :]]], axis=2)
    return np.ascontiguousarray(edges.reshape(T, base.shape[0], 2)), len(keep)


def sweep(f: ParamOracle, G, usize: int, mode: str = "pins", allow_overlap: bool = False,
          cap_usize: Optional[int] = DEFAULT_USIZE_CAP) -> Sweep:
    """All alternating sums of ``f`` for ``G`` over ``|U| = usize`` and every ``s``
    (``s: U -> V`` for pins, ``s: U -> V \\ U`` for contraction)."""
    if mode not in ("pins", "contract"):
        raise ValueError(f"unknown mode {mode!r}")
    if cap_usize is not None and usize > cap_usize:
        raise CapExceededError(f"|U| = {usize} exceeds the cap {cap_usize}")
    directed = isinstance(G, DirectedMultigraph)
    if directed != f.directed:
        raise TypeError("oracle and graph kinds differ")
    perms = signed_permutations(usize)
    out = Sweep(G, mode, usize)
    make = DirectedMultigraph if directed else Multigraph
    for U in itertools.combinations(range(G.n), usize):
        if mode == "contract" and not allow_overlap:
            targets = np.array([v for v in range(G.n) if v not in U], dtype=np.int64)
        else:
            targets = np.arange(G.n, dtype=np.int64)
        base = len(targets)
        digits = _map_digits(base, usize)
        T = digits.shape[0]
        if T == 0:
            continue
        if mode == "contract" and allow_overlap:
            surgery = directed_contract_pins if directed else contract_pins
            terms = [surgery(G, PinMap(U, tuple(targets[row])), True) for row in digits]
            col = np.empty(T, dtype=object)
            col[:] = f.many(terms)
            vals = _ScalarValues(col)
        else:
            edges, n2 = _term_arrays(G, U, targets, digits, mode)
            if f.model is not None:
                vals = batch_evaluate(edges, n2, f.model, directed, headroom=math.factorial(usize))
            else:
                memo: dict = {}
                col = np.empty(T, dtype=object)
                for i in range(T):
                    H = make(n2, [tuple(e) for e in edges[i].tolist()])
                    key = H.edges
                    if key not in memo:
                        memo[key] = f(H)
                    col[i] = memo[key]
                vals = _ScalarValues(col)
        # the row index of a map equals its base-`base` code
        weights = base ** np.arange(usize - 1, -1, -1, dtype=np.int64)
        acc_re = None
        acc_im = None
        for perm, sign in perms:
            code = digits[:, list(perm)] @ weights if usize else np.zeros(T, dtype=np.int64)
            term_re = vals.re[code]
            acc_re = sign * term_re if acc_re is None else acc_re + sign * term_re
            if vals.im is not None:
                term_im = vals.im[code]
                acc_im = sign * term_im if acc_im is None else acc_im + sign * term_im
        if isinstance(vals, _ScalarValues):
            block_vals = _ScalarValues(acc_re)
        else:
            block_vals = BatchValues(acc_re, acc_im, vals.scale, vals.ring)
        out.blocks.append(_Block(tuple(U), tuple(int(t) for t in targets), block_vals))
    return out


def search_violation(f: ParamOracle, usize: int, max_n: int, max_e: int = 4, mode: str = "pins",
                     allow_overlap: bool = False) -> Optional[Witness]:
    """First ``(G, U, s)`` with a nonzero alternating sum, scanning canonical graphs by
    ``(n, |E|, edges)`` and then ``(U, s)`` lexicographically; ``None`` if all vanish."""
    for G in enumerate_graphs(max_n, max_e, directed=f.directed, min_n=usize):
        found = sweep(f, G, usize, mode, allow_overlap).nonzero()
        if found:
            return found[0]
    return None
