"""Polynomials in the model variables, quantum graphs and the maps between them.

Three sparse polynomial rings appear here:

* ``YPolynomial`` in variables ``y[alpha]``, one per ``alpha`` in ``N^k``;
* ``XPolynomial`` in symmetric variables ``x[i,j] = x[j,i]`` (``1 <= i <= j <= n``);
* ``ZPolynomial`` in variables ``z[h,j]`` (``1 <= h <= k``, ``1 <= j <= n``).

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable.
Printed forms list terms in descending graded-lex order: higher total degree
first, ties broken by the flattened variable sequence.

``p_poly(G, k)`` is the partition function with ``y`` left symbolic. ``mu``
turns an x-monomial into a graph, ``tau`` substitutes ``x[i,j] ->
sum_h z[h,i] z[h,j]`` and ``sigma`` sends a z-monomial to the product of
``y[column exponent vector]`` over its columns, so that ``p(mu(q))`` and
``sigma(tau(q))`` can be compared directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from . import scalars
from .certify import DEFAULT_USIZE_CAP, signed_permutations
from .errors import CapExceededError, GraphError
from .graphs import (
    DirectedMultigraph,
    Multigraph,
    PinMap,
    add_pins,
    canonical,
    contract_pins,
    directed_add_pins,
    directed_contract_pins,
)
from .models import VertexModel
from .partition import DEFAULT_EDGE_CAP

# --------------------------------------------------------------------------
# Sparse polynomials


def _mono_mul(a: tuple, b: tuple) -> tuple:
    merged = dict(a)
    for var, e in b:
        merged[var] = merged.get(var, 0) + e
    return tuple(sorted(merged.items()))


def _order_key(mono: tuple):
    flat = tuple(var for var, e in mono for _ in range(e))
    return (len(flat), flat)


class _SparsePolynomial:
    """Immutable ``{monomial: coefficient}`` with exact coefficients."""

    __slots__ = ("terms",)
    prefix = "?"

    def __init__(self, terms: Optional[Mapping] = None):
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted((self._check_var(v), int(e)) for v, e in mono if e))
            if c:
                total = clean.get(mono, 0) + c
                if total:
                    clean[mono] = total
                else:
                    clean.pop(mono, None)
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # subclasses validate and describe their variables
    def _check_var(self, var: tuple) -> tuple:
        return tuple(var)

    def _same(self, **changes):
        return type(self)(changes.get("terms", {}), **self._meta())

    def _meta(self) -> dict:
        return {}

    def _compatible(self, other) -> None:
        if type(other) is not type(self) or other._meta() != self._meta():
            raise TypeError(f"cannot combine {self!r} with {other!r}")

    @classmethod
    def constant(cls, c, **meta):
        return cls({(): c}, **meta)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return self._same(terms=out)

    def __neg__(self):
        return self._same(terms={m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, _SparsePolynomial):
            return self._same(terms={m: c * other for m, c in self.terms.items()})
        self._compatible(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return self._same(terms=out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = self.constant(1, **self._meta())
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return type(other) is type(self) and other._meta() == self._meta() and \
            dict(other.terms) == dict(self.terms)

    def __hash__(self):
        return hash((type(self).__name__, tuple(self._meta().items()), tuple(self.terms.items())))

    def monomials(self) -> list[tuple]:
        return sorted(self.terms, key=_order_key, reverse=True)

    def _var_text(self, var: tuple) -> str:
        return f"{self.prefix}[{','.join(str(a) for a in var)}]"

    def _mono_text(self, mono: tuple) -> str:
        return "*".join(self._var_text(v) + (f"^{e}" if e > 1 else "") for v, e in mono)

    def to_text(self) -> str:
        """Canonical text: ``"c1*v[..]^e*... + c2*..."`` with coefficients as ``p/q``."""
        if not self.terms:
            return "0"
        parts = []
        for mono in self.monomials():
            c = self.terms[mono]
            ctext = scalars.format_scalar(c)
            if isinstance(c, scalars.Gaussian):
                ctext = f"({ctext})"
            parts.append(ctext if not mono else f"{ctext}*{self._mono_text(mono)}")
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r})"


class YPolynomial(_SparsePolynomial):
    """Polynomial in ``y[alpha]``; variables are length-``k`` index tuples."""

    __slots__ = ("k",)
    prefix = "y"

    def __init__(self, terms: Optional[Mapping] = None, k: int = 1):
        object.__setattr__(self, "k", int(k))
        super().__init__(terms)

    def _check_var(self, var):
        var = tuple(int(a) for a in var)
        if len(var) != self.k or any(a < 0 for a in var):
            raise ValueError(f"y-variable {var} is not in N^{self.k}")
        return var

    def _meta(self):
        return {"k": self.k}

    @classmethod
    def variable(cls, alpha: Sequence[int]) -> "YPolynomial":
        return cls({((tuple(alpha), 1),): 1}, k=len(alpha))

    def evaluate(self, y: VertexModel):
        """Value at the model ``y`` (exact, in the model's ring)."""
        if y.dims != self.k:
            raise ValueError(f"model has {y.dims} index coordinates, polynomial expects {self.k}")
        total = scalars.zero(y.ring)
        for mono, c in self.terms.items():
            term = scalars.coerce(c, y.ring) if not isinstance(c, scalars.Gaussian) else c
            for alpha, e in mono:
                term = term * y(alpha) ** e
            total = total + term
        return total


class XPolynomial(_SparsePolynomial):
    """Polynomial in the symmetric variables ``x[i,j]`` (stored with ``i <= j``, 1-based)."""

    __slots__ = ()
    prefix = "x"

    def _check_var(self, var):
        i, j = (int(a) for a in var)
        if i < 1 or j < 1:
            raise ValueError("x-variable indices are 1-based")
        return (i, j) if i <= j else (j, i)

    @classmethod
    def variable(cls, i: int, j: int) -> "XPolynomial":
        return cls({(((i, j), 1),): 1})

    def max_index(self) -> int:
        return max((max(v) for m in self.terms for v, _ in m), default=0)


class ZPolynomial(_SparsePolynomial):
    """Polynomial in ``z[h,j]``: row ``h`` in ``1..k``, column ``j`` in ``1..n``."""

    __slots__ = ("k", "n")
    prefix = "z"

    def __init__(self, terms: Optional[Mapping] = None, k: int = 1, n: int = 1):
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "n", int(n))
        super().__init__(terms)

    def _check_var(self, var):
        h, j = (int(a) for a in var)
        if not (1 <= h <= self.k and 1 <= j <= self.n):
            raise ValueError(f"z-variable {(h, j)} outside [1..{self.k}] x [1..{self.n}]")
        return (h, j)

    def _meta(self):
        return {"k": self.k, "n": self.n}


_X_FACTOR = re.compile(r"^x\[\s*(\d+)\s*,\s*(\d+)\s*\](?:\^(\d+))?$")


def parse_x_monomial(text: str) -> XPolynomial:
    """Parse ``"x[1,2]^2*x[1,1]"`` (or ``"1"``) into a one-term ``XPolynomial``."""
    text = text.replace(" ", "")
    if text == "1":
        return XPolynomial.constant(1)
    exps: dict = {}
    for factor in text.split("*"):
        m = _X_FACTOR.match(factor)
        if not m:
            raise ValueError(f"cannot parse x-monomial factor {factor!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if i < 1 or j < 1:
            raise ValueError("x-variable indices are 1-based")
        var = (min(i, j), max(i, j))
        exps[var] = exps.get(var, 0) + int(m.group(3) or 1)
    return XPolynomial({tuple(exps.items()): 1})


def x_monomials(n: int, max_degree: int) -> Iterator[XPolynomial]:
    """Every x-monomial over ``n`` indices with total degree ``<= max_degree``,
    by degree and then lexicographically."""
    variables = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]

    def rec(start: int, left: int):
        yield ()
        for idx in range(start, len(variables)):
            for e in range(1, left + 1):
                for rest in rec(idx + 1, left - e):
                    yield ((variables[idx], e),) + rest

    monos = sorted(set(rec(0, max_degree)), key=_order_key)
    for mono in monos:
        yield XPolynomial({mono: 1})


# --------------------------------------------------------------------------
# The map p


def p_poly(G: Multigraph, k: int, cap_edges: Optional[int] = DEFAULT_EDGE_CAP) -> YPolynomial:
    """Sum over edge colourings of the monomial ``prod_v y[kappa(delta(v))]``.

    Colourings are summed edge by edge. A vertex whose last edge has been
    coloured is moved into an unordered multiset, so states that differ only in
    finished vertices merge early.
    """
    if isinstance(G, DirectedMultigraph):
        raise GraphError("p_poly takes an undirected multigraph")
    if cap_edges is not None and G.num_edges > cap_edges:
        raise CapExceededError(f"|E| = {G.num_edges} exceeds the cap {cap_edges}")
    zero_vec = (0,) * k
    if k == 0 and G.num_edges:
        return YPolynomial({}, k=0)
    last = [-1] * G.n
    for i, (u, v) in enumerate(G.edges):
        last[u] = last[v] = i
    finished_at: dict[int, list[int]] = {}
    for v, i in enumerate(last):
        finished_at.setdefault(i, []).append(v)

    def retire(active: tuple, done: tuple, vertices) -> tuple[tuple, tuple]:
        if not vertices:
            return active, done
        active = list(active)
        done = list(done)
        for v in vertices:
            done.append(active[v])
            active[v] = None
        return tuple(active), tuple(sorted(done))

    start = retire(tuple([zero_vec] * G.n), (), finished_at.get(-1, []))
    states: dict = {start: 1}
    for i, (u, v) in enumerate(G.edges):
        nxt: dict = {}
        for (active, done), count in states.items():
            for c in range(k):
                new = list(active)
                for w in (u, v):
                    alpha = list(new[w])
                    alpha[c] += 1
                    new[w] = tuple(alpha)
                key = retire(tuple(new), done, finished_at.get(i, []))
                nxt[key] = nxt.get(key, 0) + count
        states = nxt
    terms: dict = {}
    for (_, done), count in states.items():
        exps: dict = {}
        for alpha in done:
            exps[alpha] = exps.get(alpha, 0) + 1
        mono = tuple(sorted(exps.items()))
        terms[mono] = terms.get(mono, 0) + count
    return YPolynomial(terms, k=k)


@dataclass(frozen=True)
class QuantumGraph:
    """A finite formal combination of graphs; keys are canonical forms."""

    terms: Mapping = MappingProxyType({})

    def __post_init__(self):
        clean: dict = {}
        for G, c in self.terms.items():
            key = canonical(G)
            clean[key] = clean.get(key, 0) + c
        clean = {G: c for G, c in clean.items() if c}
        ordered = sorted(clean.items(), key=lambda kv: (kv[0].n, kv[0].num_edges, kv[0].edges))
        object.__setattr__(self, "terms", MappingProxyType(dict(ordered)))

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple]) -> "QuantumGraph":
        """Build from ``(graph, coefficient)`` pairs; isomorphic graphs are merged."""
        acc: dict = {}
        for G, c in pairs:
            acc[G] = acc.get(G, 0) + c
        return cls(acc)

    def __add__(self, other: "QuantumGraph") -> "QuantumGraph":
        return QuantumGraph.from_terms(list(self.terms.items()) + list(other.terms.items()))

    def __mul__(self, c) -> "QuantumGraph":
        return QuantumGraph({G: v * c for G, v in self.terms.items()})

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, f: Callable):
        """Linear extension of a graph parameter ``f``."""
        total = 0
        for G, c in self.terms.items():
            total = c * f(G) + total
        return total


def p_quantum(q: QuantumGraph, k: int, cap_edges: Optional[int] = DEFAULT_EDGE_CAP) -> YPolynomial:
    total = YPolynomial({}, k=k)
    for G, c in q.terms.items():
        total = total + p_poly(G, k, cap_edges) * c
    return total


def _generator(G, p: PinMap, surgery, cap_usize: Optional[int]) -> QuantumGraph:
    r = len(p.U)
    if cap_usize is not None and r > cap_usize:
        raise CapExceededError(f"|U| = {r} exceeds the cap {cap_usize}")
    return QuantumGraph.from_terms((surgery(G, p.permuted(perm)), sign)
                                   for perm, sign in signed_permutations(r))


def kernel_generator_pins(G, p: PinMap, cap_usize: Optional[int] = DEFAULT_USIZE_CAP) -> QuantumGraph:
    """``sum_pi sgn(pi) G_{s o pi}`` with isomorphic terms merged."""
    p.check(G.n)
    surgery = directed_add_pins if isinstance(G, DirectedMultigraph) else add_pins
    return _generator(G, p, surgery, cap_usize)


def kernel_generator_contract(G, p: PinMap, cap_usize: Optional[int] = DEFAULT_USIZE_CAP) -> QuantumGraph:
    """``sum_pi sgn(pi) G/(s o pi)``; needs ``s(U)`` disjoint from ``U``."""
    p.check(G.n, disjoint=True)
    surgery = directed_contract_pins if isinstance(G, DirectedMultigraph) else contract_pins
    return _generator(G, p, surgery, cap_usize)


# --------------------------------------------------------------------------
# mu, tau, sigma


def _single_monomial(q: XPolynomial) -> tuple:
    if not isinstance(q, XPolynomial):
        raise TypeError("expected an XPolynomial")
    if len(q.terms) != 1:
        raise ValueError("mu is defined on single monomials only")
    (mono, c), = q.terms.items()
    if c != 1:
        raise ValueError("mu expects a monomial with coefficient 1")
    return mono


def mu(q: XPolynomial, n: int) -> Multigraph:
    """The graph on ``n`` vertices whose edge ``{i, j}`` has multiplicity equal to the
    exponent of ``x[i,j]`` (diagonal variables give loops)."""
    mono = _single_monomial(q)
    if q.max_index() > n:
        raise ValueError(f"monomial uses index {q.max_index()} but n = {n}")
    edges = [(i - 1, j - 1) for (i, j), e in mono for _ in range(e)]
    return Multigraph(n, edges)


def tau(q: XPolynomial, k: int, n: int) -> ZPolynomial:
    """Substitute ``x[i,j] -> sum_h z[h,i] z[h,j]`` and expand."""
    if q.max_index() > n:
        raise ValueError(f"polynomial uses index {q.max_index()} but n = {n}")
    cache: dict = {}

    def image(i: int, j: int) -> ZPolynomial:
        if (i, j) not in cache:
            terms: dict = {}
            for h in range(1, k + 1):
                mono = (((h, i), 2),) if i == j else (((h, i), 1), ((h, j), 1))
                terms[mono] = terms.get(mono, 0) + 1
            cache[i, j] = ZPolynomial(terms, k=k, n=n)
        return cache[i, j]

    total = ZPolynomial({}, k=k, n=n)
    for mono, c in q.terms.items():
        term = ZPolynomial.constant(c, k=k, n=n)
        for (i, j), e in mono:
            term = term * image(i, j) ** e
        total = total + term
    return total


def sigma(m: ZPolynomial) -> YPolynomial:
    """Send ``prod z[h,j]^a(h,j)`` to ``prod_j y[a(., j)]``; a column with no
    z-factor contributes ``y[0]``."""
    out: dict = {}
    for mono, c in m.terms.items():
        cols = [[0] * m.k for _ in range(m.n)]
        for (h, j), e in mono:
            cols[j - 1][h - 1] += e
        exps: dict = {}
        for col in cols:
            exps[tuple(col)] = exps.get(tuple(col), 0) + 1
        key = tuple(sorted(exps.items()))
        out[key] = out.get(key, 0) + c
    return YPolynomial(out, k=m.k)


@dataclass(frozen=True)
class DiagramResult:
    left: YPolynomial
    right: YPolynomial

    @property
    def holds(self) -> bool:
        return self.left == self.right


def diagram_sides(q: XPolynomial, k: int, n: int) -> DiagramResult:
    """Both routes from an x-monomial to a y-polynomial: ``p(mu(q))`` and ``sigma(tau(q))``."""
    return DiagramResult(p_poly(mu(q, n), k), sigma(tau(q, k, n)))


def diagram_check(q: XPolynomial, k: int, n: int) -> bool:
    return diagram_sides(q, k, n).holds
