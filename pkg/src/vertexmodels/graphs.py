"""Multigraphs with loops, directed multigraphs, and the graph surgeries.

Vertices are ``0..n-1``. Undirected edges are stored as ``(u, v)`` with
``u <= v`` in a sorted tuple (repeats are parallel edges, ``u == v`` is a
loop). A loop contributes 2 to the degree of its vertex.

Isomorphism is decided by individualization-refinement: colour refinement on
multiplicity-weighted neighbourhoods, then branching over the vertices of the
first non-singleton cell. The canonical form is the lexicographically least
relabelled edge list over all leaves of the search tree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import GraphError, GraphSizeError, PinMapError

MAX_ISO_VERTICES = 12


# --------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        norm = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} has an endpoint outside [0, {self.n})")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree(self, v: int) -> int:
        return self.degrees()[v]

    def loops(self) -> list[int]:
        out = [0] * self.n
        for u, v in self.edges:
            if u == v:
                out[u] += 1
        return out

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def ends(self) -> list[list[int]]:
        """Per vertex, the indices of incident edges; a loop's index appears twice."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            out[u].append(i)
            out[v].append(i)
        return out

    def components(self) -> int:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return sum(1 for v in range(self.n) if find(v) == v)

    def __repr__(self):
        return f"Multigraph(n={self.n}, edges={list(self.edges)})"


@dataclass(frozen=True)
class DirectedMultigraph:
    n: int
    arcs: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        norm = []
        for a in self.arcs:
            u, v = (int(x) for x in a)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"arc {a} has an endpoint outside [0, {self.n})")
            norm.append((u, v))
        object.__setattr__(self, "arcs", tuple(sorted(norm)))

    @property
    def num_edges(self) -> int:
        return len(self.arcs)

    @property
    def edges(self) -> tuple:
        return self.arcs

    def in_degrees(self) -> list[int]:
        deg = [0] * self.n
        for _, v in self.arcs:
            deg[v] += 1
        return deg

    def out_degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, _ in self.arcs:
            deg[u] += 1
        return deg

    def max_degree(self) -> int:
        return max((a + b for a, b in zip(self.in_degrees(), self.out_degrees())), default=0)

    def __repr__(self):
        return f"DirectedMultigraph(n={self.n}, arcs={list(self.arcs)})"


@dataclass(frozen=True)
class PinMap:
    """A map ``s: U -> V`` with ``U`` strictly increasing; ``s[i]`` is the image of ``U[i]``."""

    U: tuple = ()
    s: tuple = ()

    def __post_init__(self):
        U = tuple(int(u) for u in self.U)
        s = tuple(int(t) for t in self.s)
        if len(U) != len(s):
            raise PinMapError("U and s must have the same length")
        if any(a >= b for a, b in zip(U, U[1:])):
            raise PinMapError("U must be strictly increasing")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "s", s)

    def __len__(self):
        return len(self.U)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.U, self.s))

    def permuted(self, perm: Sequence[int]) -> "PinMap":
        """The pin map ``s o pi`` where ``pi`` sends ``U[i]`` to ``U[perm[i]]``."""
        return PinMap(self.U, tuple(self.s[j] for j in perm))

    def check(self, n: int, disjoint: bool = False) -> None:
        for x in self.U + self.s:
            if not 0 <= x < n:
                raise PinMapError(f"pin vertex {x} outside [0, {n})")
        if disjoint and set(self.U) & set(self.s):
            raise PinMapError("s(U) must not meet U for pin contraction")


@dataclass(frozen=True)
class LabeledGraph:
    graph: Multigraph
    labels: tuple = ()

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        if len(set(labels)) != len(labels):
            raise GraphError("labels must be injective")
        if any(not 0 <= v < self.graph.n for v in labels):
            raise GraphError("label points outside the vertex set")
        object.__setattr__(self, "labels", labels)

    @property
    def l(self) -> int:
        return len(self.labels)


# --------------------------------------------------------------------------
# Surgeries (undirected)


def disjoint_union(G: Multigraph, H: Multigraph) -> Multigraph:
    shift = G.n
    return Multigraph(G.n + H.n, G.edges + tuple((u + shift, v + shift) for u, v in H.edges))


def add_pins(G: Multigraph, p: PinMap) -> Multigraph:
    """``G_s``: add the edge ``{u, s(u)}`` for every pinned ``u``."""
    p.check(G.n)
    return Multigraph(G.n, G.edges + tuple(zip(p.U, p.s)))


def _merge_classes(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[list[int], int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    # classes are numbered by their smallest original vertex
    roots = {}
    label = [0] * n
    for v in range(n):
        r = find(v)
        if r not in roots:
            roots[r] = len(roots)
        label[v] = roots[r]
    return label, len(roots)


def contract_pins(G: Multigraph, p: PinMap, allow_overlap: bool = False) -> Multigraph:
    """``G/s``: merge every ``u`` with ``s(u)``; the pin edges themselves vanish.

    ``allow_overlap`` lifts the ``s(U) & U = {}`` requirement (the merge is then a
    union-find closure); it exists to probe why the condition is needed.
    """
    p.check(G.n, disjoint=not allow_overlap)
    label, m = _merge_classes(G.n, zip(p.U, p.s))
    return Multigraph(m, tuple((label[u], label[v]) for u, v in G.edges))


def pendant_reduction(G: Multigraph, p: PinMap) -> tuple[Multigraph, PinMap]:
    """Hang a new leaf ``u'`` off each pinned ``u`` and pin ``u'`` to ``s(u)``.

    Contracting the new pins reproduces ``add_pins(G, p)`` for every reordering
    of ``s``.
    """
    p.check(G.n)
    new = tuple(range(G.n, G.n + len(p)))
    G2 = Multigraph(G.n + len(p), G.edges + tuple(zip(p.U, new)))
    return G2, PinMap(new, p.s)


def glue_labeled(G: LabeledGraph, H: LabeledGraph) -> Multigraph:
    if G.l != H.l:
        raise GraphError(f"cannot glue a {G.l}-labeled graph to a {H.l}-labeled graph")
    where = {}
    for i, hv in enumerate(H.labels):
        where[hv] = G.labels[i]
    nxt = G.graph.n
    for v in range(H.graph.n):
        if v not in where:
            where[v] = nxt
            nxt += 1
    edges = G.graph.edges + tuple((where[u], where[v]) for u, v in H.graph.edges)
    return Multigraph(nxt, edges)


# --------------------------------------------------------------------------
# Surgeries (directed)


def directed_disjoint_union(G: DirectedMultigraph, H: DirectedMultigraph) -> DirectedMultigraph:
    shift = G.n
    return DirectedMultigraph(G.n + H.n, G.arcs + tuple((u + shift, v + shift) for u, v in H.arcs))


def directed_add_pins(G: DirectedMultigraph, p: PinMap) -> DirectedMultigraph:
    p.check(G.n)
    return DirectedMultigraph(G.n, G.arcs + tuple(zip(p.U, p.s)))


def directed_contract_pins(
    G: DirectedMultigraph, p: PinMap, allow_overlap: bool = False
) -> DirectedMultigraph:
    p.check(G.n, disjoint=not allow_overlap)
    label, m = _merge_classes(G.n, zip(p.U, p.s))
    return DirectedMultigraph(m, tuple((label[u], label[v]) for u, v in G.arcs))


def directed_pendant_reduction(G: DirectedMultigraph, p: PinMap) -> tuple[DirectedMultigraph, PinMap]:
    """Directed pendant reduction; the new arc runs ``u -> u'`` so that contracting
    ``(u', s(u))`` leaves the arc ``u -> s(u)``."""
    p.check(G.n)
    new = tuple(range(G.n, G.n + len(p)))
    G2 = DirectedMultigraph(G.n + len(p), G.arcs + tuple(zip(p.U, new)))
    return G2, PinMap(new, p.s)


# --------------------------------------------------------------------------
# Canonical forms


def _adjacency(n: int, edges, directed: bool):
    out_adj: list[dict[int, int]] = [dict() for _ in range(n)]
    in_adj: list[dict[int, int]] = [dict() for _ in range(n)]
    loops = [0] * n
    for u, v in edges:
        if u == v:
            loops[u] += 1
            continue
        out_adj[u][v] = out_adj[u].get(v, 0) + 1
        in_adj[v][u] = in_adj[v].get(u, 0) + 1
        if not directed:
            out_adj[v][u] = out_adj[v].get(u, 0) + 1
            in_adj[u][v] = in_adj[u].get(v, 0) + 1
    return out_adj, in_adj, loops


def _rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(colors: list[int], out_adj, in_adj, directed: bool) -> list[int]:
    n = len(colors)
    count = len(set(colors))
    while True:
        keys = []
        for v in range(n):
            outs = tuple(sorted((colors[w], m) for w, m in out_adj[v].items()))
            if directed:
                ins = tuple(sorted((colors[w], m) for w, m in in_adj[v].items()))
                keys.append((colors[v], outs, ins))
            else:
                keys.append((colors[v], outs))
        new = _rank(keys)
        new_count = len(set(new))
        if new_count == count:
            return new
        colors, count = new, new_count


def _are_twins(v: int, w: int, out_adj, in_adj, loops) -> bool:
    """True when swapping ``v`` and ``w`` (fixing all else) is an automorphism."""
    if loops[v] != loops[w]:
        return False
    if out_adj[v].get(w, 0) != out_adj[w].get(v, 0):
        return False
    for adj in (out_adj, in_adj):
        a = {x: m for x, m in adj[v].items() if x != w}
        b = {x: m for x, m in adj[w].items() if x != v}
        if a != b:
            return False
    return True


def _canonical_edges(n: int, edges, directed: bool, initial: Optional[list] = None,
                     max_vertices: int = MAX_ISO_VERTICES):
    if n > max_vertices:
        raise GraphSizeError(f"isomorphism routines are capped at {max_vertices} vertices (got {n})")
    out_adj, in_adj, loops = _adjacency(n, edges, directed)
    if directed:
        base = [(sum(in_adj[v].values()) + loops[v], sum(out_adj[v].values()) + loops[v], loops[v])
                for v in range(n)]
    else:
        base = [(sum(out_adj[v].values()) + 2 * loops[v], loops[v]) for v in range(n)]
    if initial is not None:
        base = [(initial[v], base[v]) for v in range(n)]
    colors = _rank(base)

    best = None
    best_perm = None

    def relabel(pos):
        if directed:
            return tuple(sorted((pos[u], pos[v]) for u, v in edges))
        return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges))

    def search(colors):
        nonlocal best, best_perm
        colors = _refine(colors, out_adj, in_adj, directed)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            cand = relabel(colors)
            if best is None or cand < best:
                best, best_perm = cand, list(colors)
            return
        reps: list[int] = []
        for v in cells[target]:
            if any(_are_twins(v, w, out_adj, in_adj, loops) for w in reps):
                continue
            reps.append(v)
            search(_rank([(c, 0 if w == v else 1) for w, c in enumerate(colors)]))

    search(colors)
    return best, best_perm


def canonical_form(G: Multigraph, max_vertices: int = MAX_ISO_VERTICES) -> Multigraph:
    edges, _ = _canonical_edges(G.n, G.edges, False, max_vertices=max_vertices)
    return Multigraph(G.n, edges)


def is_isomorphic(G: Multigraph, H: Multigraph, max_vertices: int = MAX_ISO_VERTICES) -> bool:
    if G.n != H.n or len(G.edges) != len(H.edges):
        return False
    if sorted(G.degrees()) != sorted(H.degrees()) or sorted(G.loops()) != sorted(H.loops()):
        return False
    return canonical_form(G, max_vertices) == canonical_form(H, max_vertices)


def directed_canonical_form(G: DirectedMultigraph, max_vertices: int = MAX_ISO_VERTICES) -> DirectedMultigraph:
    arcs, _ = _canonical_edges(G.n, G.arcs, True, max_vertices=max_vertices)
    return DirectedMultigraph(G.n, arcs)


def directed_is_isomorphic(G: DirectedMultigraph, H: DirectedMultigraph,
                           max_vertices: int = MAX_ISO_VERTICES) -> bool:
    if G.n != H.n or len(G.arcs) != len(H.arcs):
        return False
    if sorted(zip(G.in_degrees(), G.out_degrees())) != sorted(zip(H.in_degrees(), H.out_degrees())):
        return False
    return directed_canonical_form(G, max_vertices) == directed_canonical_form(H, max_vertices)


def labeled_canonical_form(G: LabeledGraph, max_vertices: int = MAX_ISO_VERTICES) -> LabeledGraph:
    """Canonical form under isomorphisms fixing every label; labels land on ``0..l-1``."""
    l = G.l
    initial = [l] * G.graph.n
    for i, v in enumerate(G.labels):
        initial[v] = i
    edges, _ = _canonical_edges(G.graph.n, G.graph.edges, False, initial, max_vertices)
    return LabeledGraph(Multigraph(G.graph.n, edges), tuple(range(l)))


def canonical(G):
    """Canonical form of either graph kind."""
    if isinstance(G, DirectedMultigraph):
        return directed_canonical_form(G)
    return canonical_form(G)


# --------------------------------------------------------------------------
# Enumeration


def _slots(n: int, directed: bool) -> list[tuple[int, int]]:
    if directed:
        return [(u, v) for u in range(n) for v in range(n)]
    return [(u, v) for u in range(n) for v in range(u, n)]


@lru_cache(maxsize=None)
def _enumerate(n: int, max_e: int, directed: bool) -> tuple:
    make = DirectedMultigraph if directed else Multigraph
    canon = directed_canonical_form if directed else canonical_form
    slots = _slots(n, directed)
    level = {make(n, ())}
    out = [make(n, ())]
    for _ in range(max_e):
        nxt = set()
        for g in level:
            for s in slots:
                nxt.add(canon(make(n, g.edges + (s,))))
        out.extend(sorted(nxt, key=lambda g: g.edges))
        level = nxt
    return tuple(out)


def enumerate_graphs(max_n: int, max_e: int, directed: bool = False, min_n: int = 0) -> list:
    """All (directed) multigraphs with ``min_n <= n <= max_n`` and at most ``max_e``
    edges, one canonical representative per isomorphism class, ordered by
    ``(n, |E|, edge list)``."""
    out = []
    for n in range(min_n, max_n + 1):
        out.extend(_enumerate(n, max_e, directed))
    return out


def iter_pin_maps(n: int, usize: int, disjoint: bool = False) -> Iterator[PinMap]:
    """All ``(U, s)`` with ``|U| = usize`` in lexicographic order; ``disjoint`` restricts
    ``s`` to ``V \\ U``."""
    for U in itertools.combinations(range(n), usize):
        targets = [v for v in range(n) if v not in U] if disjoint else list(range(n))
        for s in itertools.product(targets, repeat=usize):
            yield PinMap(U, s)


# --------------------------------------------------------------------------
# Builders and file I/O


def path_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Multigraph:
    if n == 1:
        return Multigraph(1, ((0, 0),))
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def empty_graph(n: int = 0) -> Multigraph:
    return Multigraph(n, ())


def graph_to_json(G, labels: Optional[Sequence[int]] = None) -> dict:
    obj = {
        "directed": isinstance(G, DirectedMultigraph),
        "n": G.n,
        "edges": [list(e) for e in G.edges],
    }
    if labels is not None:
        obj["labels"] = list(labels)
    return obj


def graph_from_json(obj: dict):
    """Parse the graph file object; returns a graph, or a ``LabeledGraph`` when
    ``labels`` is present."""
    try:
        directed = bool(obj.get("directed", False))
        n = int(obj["n"])
        edges = tuple(tuple(e) for e in obj.get("edges", []))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise GraphError(f"malformed graph object: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise GraphError("every edge must be a pair [u, v]")
    G = DirectedMultigraph(n, edges) if directed else Multigraph(n, edges)
    if "labels" in obj:
        if directed:
            raise GraphError("labeled directed graphs are not supported")
        return LabeledGraph(G, tuple(obj["labels"]))
    return G


def load_graph(path: str):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: invalid JSON ({exc})") from exc
    return graph_from_json(obj)
