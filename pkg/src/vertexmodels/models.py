"""Vertex-model tables ``y: N^k -> F``, moment matrices and exact rank.

A model is stored sparsely: any multiset index that is absent has value 0.
A model read from a file may declare a ``degree_cap``; it then only speaks for
indices of total degree at most the cap.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Mapping, Optional, Sequence

from . import scalars
from .errors import MixedRingError, ModelError
from .scalars import GAUSSIAN, RATIONAL, Gaussian


def _freeze_entries(k: int, ring: str, entries: Mapping, key_len: int) -> Mapping:
    out = {}
    for key, value in entries.items():
        key = tuple(int(a) for a in key)
        if len(key) != key_len:
            raise ModelError(f"index {key} should have length {key_len}")
        if any(a < 0 for a in key):
            raise ModelError(f"index {key} has a negative entry")
        value = scalars.coerce(value, ring)
        if value:
            out[key] = value
    return MappingProxyType(dict(sorted(out.items())))


@dataclass(frozen=True, eq=False)
class VertexModel:
    k: int
    entries: Mapping = MappingProxyType({})
    ring: str = RATIONAL
    degree_cap: Optional[int] = None

    def __post_init__(self):
        if self.k < 0:
            raise ModelError("k must be non-negative")
        if self.ring not in scalars.RINGS:
            raise ModelError(f"unknown ring {self.ring!r}")
        object.__setattr__(self, "entries", _freeze_entries(self.k, self.ring, self.entries, self.k))

    @property
    def dims(self) -> int:
        """Length of an index vector."""
        return self.k

    def __call__(self, alpha) -> scalars.Scalar:
        return self.entries.get(tuple(alpha), scalars.zero(self.ring))

    def __eq__(self, other):
        return (
            isinstance(other, VertexModel)
            and type(other) is type(self)
            and (self.k, self.ring, self.degree_cap) == (other.k, other.ring, other.degree_cap)
            and dict(self.entries) == dict(other.entries)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.k, self.ring, tuple(self.entries.items())))


@dataclass(frozen=True, eq=False)
class DirectedVertexModel(VertexModel):
    """A ``2k``-index model for directed graphs: the key is the in-colour vector
    followed by the out-colour vector (both of length ``k``)."""

    def __post_init__(self):
        if self.k < 0:
            raise ModelError("k must be non-negative")
        if self.ring not in scalars.RINGS:
            raise ModelError(f"unknown ring {self.ring!r}")
        object.__setattr__(self, "entries", _freeze_entries(self.k, self.ring, self.entries, 2 * self.k))

    @property
    def dims(self) -> int:
        return 2 * self.k

    def value(self, alpha_in, alpha_out) -> scalars.Scalar:
        return self(tuple(alpha_in) + tuple(alpha_out))

    def as_vertex_model(self) -> VertexModel:
        """The same table viewed as an undirected ``2k``-colour model (for moment rank)."""
        return VertexModel(2 * self.k, self.entries, self.ring, self.degree_cap)


# --------------------------------------------------------------------------
# Index bookkeeping


def indices_of_degree(k: int, d: int) -> list[tuple]:
    """All ``alpha`` in ``N^k`` with ``|alpha| = d``, lexicographically descending."""
    if k == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in indices_of_degree(k - 1, d - first):
            out.append((first,) + rest)
    return out


def graded_indices(k: int, d: int) -> list[tuple]:
    """All ``alpha`` with ``|alpha| <= d`` in graded-lexicographic order."""
    return [a for e in range(d + 1) for a in indices_of_degree(k, e)]


def model_truncation_check(y: VertexModel, needed_degree: int) -> bool:
    return y.degree_cap is None or y.degree_cap >= needed_degree


# --------------------------------------------------------------------------
# Moment matrices and rank


@dataclass(frozen=True)
class MomentSlice:
    k: int
    d: int
    indices: tuple
    matrix: tuple

    @property
    def size(self) -> int:
        return len(self.indices)


def moment_slice(y: VertexModel, d: int) -> MomentSlice:
    """Rows and columns indexed by ``|alpha| <= d`` in graded-lex order, entries ``y[alpha+beta]``."""
    if d < 0:
        raise ModelError("degree bound must be non-negative")
    idx = graded_indices(y.dims, d)
    rows = tuple(
        tuple(y(tuple(a + b for a, b in zip(al, be))) for be in idx) for al in idx
    )
    return MomentSlice(y.dims, d, tuple(idx), rows)


def _ring_of_matrix(M) -> str:
    rings = {scalars.ring_of(x) for row in M for x in row}
    if len(rings) > 1:
        raise MixedRingError("matrix mixes rational and Gaussian entries")
    return rings.pop() if rings else RATIONAL


def exact_rank(M) -> int:
    """Rank over Q or Q[i] by fraction-free (Bareiss) elimination.

    Rows are first scaled to integer (resp. Gaussian-integer) entries; every
    division in the elimination is then exact.
    """
    M = getattr(M, "matrix", M)
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    ring = _ring_of_matrix(rows)
    if ring == GAUSSIAN:
        return _bareiss_gaussian(rows)
    return _bareiss_int([_clear_row([Fraction(x) for x in r]) for r in rows])


def _clear_row(row: list[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = math.lcm(den, x.denominator)
    return [int(x * den) for x in row]


def _bareiss_int(A: list[list[int]]) -> int:
    nrows, ncols = len(A), len(A[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, nrows):
            a = A[r][col]
            row_r, row_p = A[r], A[rank]
            for c in range(col + 1, ncols):
                q, rem = divmod(p * row_r[c] - a * row_p[c], prev)
                assert rem == 0
                row_r[c] = q
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def _bareiss_gaussian(A) -> int:
    # Gaussian rationals form a field, so the Bareiss quotient is just field division.
    A = [[x if isinstance(x, Gaussian) else Gaussian(x) for x in r] for r in A]
    nrows, ncols = len(A), len(A[0])
    rank = 0
    prev = Gaussian(1)
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, nrows):
            a = A[r][col]
            for c in range(col + 1, ncols):
                A[r][c] = (p * A[r][c] - a * A[rank][c]) / prev
            A[r][col] = Gaussian(0)
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


# --------------------------------------------------------------------------
# Constructors


def _power(point: Sequence, alpha: Sequence[int]):
    out = 1
    for a, e in zip(point, alpha):
        out = out * a**e
    return out


def rank_r_model(k: int, points: Sequence[Sequence], coeffs: Sequence, degree_cap: int,
                 directed: bool = False) -> VertexModel:
    """``y[alpha] = sum_j c_j * a_j^alpha`` for ``|alpha| <= degree_cap``.

    The moment matrix is then a sum of ``r`` rank-one terms, so its rank is at most
    ``r``. With ``directed=True`` the points live in ``Q^(2k)`` and a
    ``DirectedVertexModel`` is returned.
    """
    dims = 2 * k if directed else k
    if len(points) != len(coeffs):
        raise ModelError("need one coefficient per point")
    if any(len(a) != dims for a in points):
        raise ModelError(f"every point must have {dims} coordinates")
    vals = [x for a in points for x in a] + list(coeffs)
    ring = GAUSSIAN if any(isinstance(scalars.parse_scalar(x) if isinstance(x, str) else x, Gaussian)
                           for x in vals) else RATIONAL
    pts = [[scalars.coerce(x, ring) for x in a] for a in points]
    cs = [scalars.coerce(c, ring) for c in coeffs]
    entries = {}
    for alpha in graded_indices(dims, degree_cap):
        total = scalars.zero(ring)
        for a, c in zip(pts, cs):
            total = total + c * _power(a, alpha)
        entries[alpha] = total
    cls = DirectedVertexModel if directed else VertexModel
    return cls(k, entries, ring, degree_cap)


def model_from_function(k: int, fn: Callable, degree_cap: int, ring: str = RATIONAL,
                        directed: bool = False, keep_cap: bool = True) -> VertexModel:
    """Tabulate ``fn(alpha)`` for ``|alpha| <= degree_cap``."""
    dims = 2 * k if directed else k
    entries = {a: fn(a) for a in graded_indices(dims, degree_cap)}
    cls = DirectedVertexModel if directed else VertexModel
    return cls(k, entries, ring, degree_cap if keep_cap else None)


def random_model(rng: random.Random, k: int, degree_cap: int, ring: str = RATIONAL,
                 span: int = 3, denominators: Sequence[int] = (1,), density: float = 1.0,
                 directed: bool = False) -> VertexModel:
    """Random small entries ``p/q`` with ``|p| <= span`` and ``q`` drawn from ``denominators``."""

    def draw():
        if rng.random() >= density:
            return 0
        return Fraction(rng.randint(-span, span), rng.choice(denominators))

    def fn(_alpha):
        if ring == GAUSSIAN:
            return Gaussian(draw(), draw())
        return draw()

    return model_from_function(k, fn, degree_cap, ring, directed)


def random_rank_r_model(rng: random.Random, k: int, r: int, degree_cap: int, span: int = 2,
                        ring: str = RATIONAL, directed: bool = False) -> VertexModel:
    dims = 2 * k if directed else k

    def coord():
        if ring == GAUSSIAN:
            return Gaussian(rng.randint(-span, span), rng.randint(-span, span))
        return rng.randint(-span, span)

    points = [[coord() for _ in range(dims)] for _ in range(r)]
    coeffs = [rng.choice([-2, -1, 1, 2, 3]) for _ in range(r)]
    return rank_r_model(k, points, coeffs, degree_cap, directed=directed)


# --------------------------------------------------------------------------
# File I/O


def model_to_json(y: VertexModel) -> dict:
    directed = isinstance(y, DirectedVertexModel)
    entries = []
    for key, value in y.entries.items():
        item = {"alpha_in": list(key[: y.k]), "alpha_out": list(key[y.k:])} if directed \
            else {"alpha": list(key)}
        item["value"] = scalars.to_json(value)
        entries.append(item)
    return {"k": y.k, "scalar": y.ring, "degree_cap": y.degree_cap, "directed": directed,
            "entries": entries}


def model_from_json(obj: dict) -> VertexModel:
    try:
        k = int(obj["k"])
        ring = obj.get("scalar", RATIONAL)
        cap = obj.get("degree_cap")
        raw = obj.get("entries", [])
        directed = bool(obj.get("directed", False)) or any("alpha_in" in e for e in raw)
        entries = {}
        for e in raw:
            key = tuple(e["alpha_in"]) + tuple(e["alpha_out"]) if directed else tuple(e["alpha"])
            if key in entries:
                raise ModelError(f"duplicate index {key}")
            entries[key] = scalars.coerce(scalars.parse_scalar(e["value"]), ring)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed model object: {exc}") from exc
    cls = DirectedVertexModel if directed else VertexModel
    return cls(k, entries, ring, None if cap is None else int(cap))


def load_model(path: str) -> VertexModel:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: invalid JSON ({exc})") from exc
    return model_from_json(obj)
