"""Partition functions of vertex models.

Three routes compute the same exact value:

* ``partition_brute`` enumerates every edge colouring in pure Python and is the
  reference;
* ``partition_contract`` builds one symmetric tensor per vertex and contracts
  them edge by edge (greedy minimum-width order by default);
* ``batch_evaluate`` runs the brute-force sum in compiled int64 code over many
  same-shaped graphs at once, after proving that no intermediate can overflow.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import scalars
from ._kernels import eval_gaussian, eval_rational
from .errors import CapExceededError, ModelDegreeError, ModelError
from .graphs import DirectedMultigraph, Multigraph, disjoint_union
from .models import DirectedVertexModel, VertexModel
from .scalars import GAUSSIAN, Gaussian

DEFAULT_EDGE_CAP = 16
DEFAULT_WIDTH_CAP = 8
MAX_TABLE_SIZE = 1 << 24


def _check_model(G, y: VertexModel, directed: bool) -> None:
    if directed and not isinstance(y, DirectedVertexModel):
        raise ModelError("directed graphs need a DirectedVertexModel")
    if not directed and isinstance(y, DirectedVertexModel):
        raise ModelError("undirected graphs need an undirected VertexModel")
    if y.degree_cap is not None and G.max_degree() > y.degree_cap:
        raise ModelDegreeError(
            f"model is only specified up to degree {y.degree_cap}, graph has degree {G.max_degree()}"
        )


# --------------------------------------------------------------------------
# Brute force


def partition_brute(G: Multigraph, y: VertexModel, cap_edges: Optional[int] = DEFAULT_EDGE_CAP):
    """The defining sum over all ``k^|E|`` colourings; a loop shows its colour twice."""
    _check_model(G, y, directed=False)
    m = G.num_edges
    if cap_edges is not None and m > cap_edges:
        raise CapExceededError(f"brute force is capped at {cap_edges} edges (graph has {m})")
    k = y.k
    ends = G.ends()
    total = scalars.zero(y.ring)
    zero_alpha = [0] * k
    for kappa in itertools.product(range(k), repeat=m):
        prod = scalars.one(y.ring)
        for v_ends in ends:
            alpha = list(zero_alpha)
            for e in v_ends:
                alpha[kappa[e]] += 1
            val = y(alpha)
            if not val:
                prod = None
                break
            prod = prod * val
        if prod is not None:
            total = total + prod
    return total


def directed_partition(G: DirectedMultigraph, y: DirectedVertexModel,
                       cap_edges: Optional[int] = DEFAULT_EDGE_CAP, method: str = "brute"):
    """Directed partition function; a vertex sees the colours of entering arcs, then
    those of leaving arcs (a directed loop contributes once to each)."""
    if method == "batch":
        return partition_batch([G], y)[0]
    if method != "brute":
        raise ValueError(f"unknown method {method!r}")
    _check_model(G, y, directed=True)
    m = G.num_edges
    if cap_edges is not None and m > cap_edges:
        raise CapExceededError(f"brute force is capped at {cap_edges} edges (graph has {m})")
    k = y.k
    ins: list[list[int]] = [[] for _ in range(G.n)]
    outs: list[list[int]] = [[] for _ in range(G.n)]
    for i, (u, v) in enumerate(G.arcs):
        outs[u].append(i)
        ins[v].append(i)
    total = scalars.zero(y.ring)
    for kappa in itertools.product(range(k), repeat=m):
        prod = scalars.one(y.ring)
        for v in range(G.n):
            alpha = [0] * (2 * k)
            for e in ins[v]:
                alpha[kappa[e]] += 1
            for e in outs[v]:
                alpha[k + kappa[e]] += 1
            val = y(alpha)
            if not val:
                prod = None
                break
            prod = prod * val
        if prod is not None:
            total = total + prod
    return total


# --------------------------------------------------------------------------
# Tensor contraction


def vertex_tensor(y: VertexModel, degree: int, loops: int = 0) -> np.ndarray:
    """Dense ``[k]^degree`` array whose entry at a colour tuple is ``y`` of its multiset.

    ``loops`` extra loops at the vertex are summed out in place: each loop adds
    its colour twice to the multiset.
    """
    k = y.k
    loop_alphas: dict[tuple, int] = {}
    for lc in itertools.product(range(k), repeat=loops):
        extra = [0] * k
        for c in lc:
            extra[c] += 2
        loop_alphas[tuple(extra)] = loop_alphas.get(tuple(extra), 0) + 1
    T = np.empty((k,) * degree, dtype=object)
    for idx in np.ndindex(*T.shape):
        alpha = [0] * k
        for c in idx:
            alpha[c] += 1
        total = scalars.zero(y.ring)
        for extra, mult in loop_alphas.items():
            val = y([a + b for a, b in zip(alpha, extra)])
            if val:
                total = total + mult * val
        T[idx] = total
    return T


def partition_contract(G: Multigraph, y: VertexModel,
                       order: Union[None, str, Sequence[int]] = None,
                       max_width: Optional[int] = DEFAULT_WIDTH_CAP):
    """Contract the vertex tensors of ``G`` along its edges.

    ``order`` is ``None``/``"greedy"`` (pick the edge whose contraction leaves the
    fewest open ends, ties to the lowest edge index) or an explicit permutation of
    edge indices. Contracting an edge merges the two tensors holding its ends and
    sums over every edge they share.
    """
    _check_model(G, y, directed=False)
    k = y.k
    if k == 0:
        # N^0 = {()}: only the edgeless colouring exists
        return y(()) ** G.n if G.num_edges == 0 else scalars.zero(y.ring)
    m = G.num_edges
    if order is not None and order != "greedy":
        order = [int(e) for e in order]
        if sorted(order) != list(range(m)):
            raise ValueError("an explicit order must be a permutation of the edge indices")

    loop_count = G.loops()
    open_ends: list[list[int]] = [[] for _ in range(G.n)]
    for i, (u, v) in enumerate(G.edges):
        if u != v:
            open_ends[u].append(i)
            open_ends[v].append(i)
    tensors: dict[int, tuple[np.ndarray, list[int]]] = {}
    holder: dict[int, set] = {}
    cache: dict[tuple[int, int], np.ndarray] = {}
    for v in range(G.n):
        deg = len(open_ends[v])
        if max_width is not None and deg > max_width:
            raise CapExceededError(f"vertex {v} has degree {deg} above the width cap {max_width}")
        key = (deg, loop_count[v])
        if key not in cache:
            cache[key] = vertex_tensor(y, *key)
        tensors[v] = (cache[key], list(open_ends[v]))
        for e in open_ends[v]:
            holder.setdefault(e, set()).add(v)

    remaining = set(holder)

    def result_width(e: int) -> int:
        a, b = holder[e]
        la, lb = tensors[a][1], tensors[b][1]
        shared = len(set(la) & set(lb))
        return len(la) + len(lb) - 2 * shared

    queue = list(order) if isinstance(order, list) else None
    while remaining:
        if queue is not None:
            e = queue.pop(0)
            if e not in remaining:
                continue
        else:
            e = min(remaining, key=lambda x: (result_width(x), x))
        width = result_width(e)
        if max_width is not None and width > max_width:
            raise CapExceededError(f"intermediate tensor would have {width} open ends (cap {max_width})")
        a, b = sorted(holder[e])
        Ta, la = tensors[a]
        Tb, lb = tensors[b]
        shared = [x for x in la if x in lb]
        T = np.tensordot(Ta, Tb, axes=([la.index(x) for x in shared], [lb.index(x) for x in shared]))
        if not isinstance(T, np.ndarray):
            T = np.array(T, dtype=object)
        del tensors[b]
        tensors[a] = (T, [x for x in la if x not in shared] + [x for x in lb if x not in shared])
        for x in lb:
            holder[x].discard(b)
            holder[x].add(a)
        for x in shared:
            remaining.discard(x)

    total = scalars.one(y.ring)
    for T, labels in tensors.values():
        total = total * T[()]
    return scalars.coerce(total, y.ring)


# --------------------------------------------------------------------------
# Batched compiled evaluation


@dataclass
class BatchValues:
    """Exact values ``(re + i*im) / scale`` for a batch; ``im`` is ``None`` over Q."""

    re: np.ndarray
    im: Optional[np.ndarray]
    scale: int
    ring: str

    def __len__(self):
        return len(self.re)

    def scalar(self, i: int):
        return self.to_scalar(self.re[i], None if self.im is None else self.im[i])

    def to_scalar(self, re, im=None):
        if self.ring == GAUSSIAN:
            return Gaussian(Fraction(int(re), self.scale), Fraction(int(im), self.scale))
        return Fraction(int(re), self.scale)

    def scalars(self) -> list:
        return [self.scalar(i) for i in range(len(self))]


class _PreparedModel:
    """A model's entries as integer arrays over a common denominator, plus a small
    cache of dense lookup tables keyed by the per-coordinate degree bounds."""

    def __init__(self, y: VertexModel):
        self.gaussian = y.ring == GAUSSIAN
        scale = 1
        for val in y.entries.values():
            scale = math.lcm(scale, scalars.denominator_of(val))
        self.scale = scale
        dims = y.dims
        keys = np.array(list(y.entries.keys()), dtype=np.int64).reshape(len(y.entries), dims)
        if self.gaussian:
            re = [int(v.re * scale) for v in y.entries.values()]
            im = [int(v.im * scale) for v in y.entries.values()]
        else:
            re = [int(v * scale) for v in y.entries.values()]
            im = [0] * len(re)
        sizes = [abs(a) + abs(b) for a, b in zip(re, im)]
        if any(x >= 1 << 62 for x in sizes):
            self.keys = None
            return
        self.keys = keys
        self.re = np.array(re, dtype=np.int64)
        self.im = np.array(im, dtype=np.int64)
        self.size = np.array(sizes, dtype=np.int64)
        self.degree = keys.sum(axis=1)
        self._tables: dict = {}

    def table(self, bounds: tuple, strides: list, size: int, max_total: int):
        key = (bounds, tuple(strides), max_total)
        hit = self._tables.get(key)
        if hit is not None:
            return hit
        inside = np.all(self.keys <= np.array(bounds, dtype=np.int64), axis=1) if len(bounds) else \
            np.ones(len(self.keys), dtype=bool)
        inside &= self.degree <= max_total
        idx = self.keys[inside] @ np.array(strides, dtype=np.int64) if len(strides) else \
            np.zeros(int(inside.sum()), dtype=np.int64)
        table_re = np.zeros(size, dtype=np.int64)
        table_re[idx] = self.re[inside]
        table_im = None
        if self.gaussian:
            table_im = np.zeros(size, dtype=np.int64)
            table_im[idx] = self.im[inside]
        mag = np.zeros(max_total + 1, dtype=np.int64)
        np.maximum.at(mag, self.degree[inside], self.size[inside])
        if len(self._tables) > 16:
            self._tables.clear()
        self._tables[key] = (table_re, table_im, mag)
        return self._tables[key]


def _prepare(y: VertexModel) -> _PreparedModel:
    prepared = y.__dict__.get("_prepared")
    if prepared is None:
        prepared = _PreparedModel(y)
        object.__setattr__(y, "_prepared", prepared)
    return prepared


def _degrees(edges: np.ndarray, n: int, directed: bool):
    B, m = edges.shape[:2]
    rows = np.repeat(np.arange(B), m)
    indeg = np.zeros((B, n), dtype=np.int64)
    outdeg = np.zeros((B, n), dtype=np.int64)
    if m:
        np.add.at(outdeg, (rows, edges[:, :, 0].ravel()), 1)
        np.add.at(indeg, (rows, edges[:, :, 1].ravel()), 1)
    if directed:
        return indeg, outdeg
    return indeg + outdeg, None


def batch_evaluate(edges, n: int, y: VertexModel, directed: bool = False,
                   headroom: int = 1) -> BatchValues:
    """Evaluate ``f_y`` on a batch of graphs sharing ``n`` and ``|E|``.

    ``edges`` has shape ``(B, m, 2)`` (arcs are ``(tail, head)``). ``headroom``
    reserves room for later integer sums of up to that many values.
    """
    edges = np.ascontiguousarray(np.asarray(edges, dtype=np.int64))
    if edges.ndim != 3 or edges.shape[2] != 2:
        raise ValueError("edges must have shape (batch, m, 2)")
    B, m = edges.shape[:2]
    if directed != isinstance(y, DirectedVertexModel):
        raise ModelError("model kind does not match graph kind")
    k = y.k
    deg_a, deg_b = _degrees(edges, n, directed)
    total_deg = deg_a if deg_b is None else deg_a + deg_b
    max_total = int(total_deg.max()) if total_deg.size else 0
    if y.degree_cap is not None and max_total > y.degree_cap:
        raise ModelDegreeError(
            f"model is only specified up to degree {y.degree_cap}, batch needs degree {max_total}"
        )

    if directed:
        din = int(deg_a.max()) if deg_a.size else 0
        dout = int(deg_b.max()) if deg_b.size else 0
        bounds = (din,) * k + (dout,) * k
        in_strides = [(din + 1) ** c for c in range(k)]
        out_base = (din + 1) ** k
        out_strides = [out_base * (dout + 1) ** c for c in range(k)]
        strides = in_strides + out_strides
        size = out_base * (dout + 1) ** k
        end_a, end_b = out_strides, in_strides
    else:
        bounds = (max_total,) * k
        strides = [(max_total + 1) ** c for c in range(k)]
        size = (max_total + 1) ** k
        end_a = end_b = strides

    gaussian = y.ring == GAUSSIAN
    prepared = _prepare(y)
    scale_base = prepared.scale
    fallback = size > MAX_TABLE_SIZE or prepared.keys is None
    if not fallback:
        table_re, table_im, mag = prepared.table(bounds, strides, size, max_total)

    ok = np.zeros(B, dtype=bool)
    if not fallback:
        with np.errstate(divide="ignore"):
            logmag = np.log2(mag.astype(np.float64))
        per_graph = logmag[total_deg].sum(axis=1)
        per_graph = per_graph + (m * math.log2(k) if k > 0 else 0.0) + math.log2(max(headroom, 1))
        ok = per_graph < 61.0

    re_out = np.zeros(B, dtype=np.int64)
    im_out = np.zeros(B, dtype=np.int64) if gaussian else None
    if ok.any():
        sub = np.ascontiguousarray(edges[ok])
        a = np.array(end_a if k else [0], dtype=np.int64)
        b = np.array(end_b if k else [0], dtype=np.int64)
        if gaussian:
            r = np.zeros(len(sub), dtype=np.int64)
            i = np.zeros(len(sub), dtype=np.int64)
            eval_gaussian(sub, n, k, a, b, table_re, table_im, r, i)
            re_out[ok] = r
            im_out[ok] = i
        else:
            r = np.zeros(len(sub), dtype=np.int64)
            eval_rational(sub, n, k, a, b, table_re, r)
            re_out[ok] = r

    scale = scale_base**n
    if not ok.all():
        re_out = re_out.astype(object)
        if gaussian:
            im_out = im_out.astype(object)
        make = DirectedMultigraph if directed else Multigraph
        for row in np.flatnonzero(~ok):
            G = make(n, [tuple(e) for e in edges[row].tolist()])
            val = directed_partition(G, y, cap_edges=None) if directed else partition_brute(G, y, cap_edges=None)
            if gaussian:
                re_out[row] = int(val.re * scale)
                im_out[row] = int(val.im * scale)
            else:
                re_out[row] = int(val * scale)
    return BatchValues(re_out, im_out, scale, y.ring)


def partition_batch(graphs: Sequence, y: VertexModel) -> list:
    """Exact ``f_y`` for many graphs via the compiled engine (grouped by shape)."""
    directed = isinstance(y, DirectedVertexModel)
    groups: dict[tuple[int, int], list[int]] = {}
    for i, G in enumerate(graphs):
        if isinstance(G, DirectedMultigraph) != directed:
            raise ModelError("model kind does not match graph kind")
        groups.setdefault((G.n, G.num_edges), []).append(i)
    out: list = [None] * len(graphs)
    for (n, m), idx in groups.items():
        edges = np.array([graphs[i].edges for i in idx], dtype=np.int64).reshape(len(idx), m, 2)
        vals = batch_evaluate(edges, n, y, directed)
        for j, i in enumerate(idx):
            out[i] = vals.scalar(j)
    return out


def partition(G, y: VertexModel, method: str = "batch"):
    """Dispatch helper: ``"brute"``, ``"contract"`` or ``"batch"``; directed graphs use the
    directed sum."""
    if isinstance(G, DirectedMultigraph):
        return directed_partition(G, y, method="batch" if method == "batch" else "brute")
    if method == "brute":
        return partition_brute(G, y)
    if method == "contract":
        return partition_contract(G, y)
    if method == "batch":
        return partition_batch([G], y)[0]
    raise ValueError(f"unknown method {method!r}")


def multiplicativity_witness(G: Multigraph, H: Multigraph, y: VertexModel, method: str = "contract"):
    """``(f(G), f(H), f(G + H))`` for the disjoint union ``G + H``."""
    return (partition(G, y, method), partition(H, y, method), partition(disjoint_union(G, H), y, method))
