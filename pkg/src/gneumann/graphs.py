"""Finite weighted graphs, measures, and the vertex-boundary closure.

A graph is a symmetric nonnegative edge-weight function with vanishing
diagonal over an ordered finite vertex set.  Vertices carry opaque string
identifiers; all numeric kernels work on the dense indices 0..n-1 assigned
at construction.  Zero-weight entries are dropped (zero weight means "no
edge").  All types are immutable after construction.
"""

from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AsymmetricDuplicateError,
    DisconnectedClosureError,
    DomainMismatchError,
    EmptyInteriorError,
    InteriorIsWholeGraphError,
    NegativeWeightError,
    NonPositiveMeasureError,
    SelfLoopError,
    UnknownVertexError,
)

__all__ = [
    "WeightedGraph",
    "Measure",
    "SubgraphClosure",
    "build_graph",
    "is_connected",
    "vertex_boundary",
    "closure_subgraph",
]


def _as_vertex(v) -> str:
    return v if isinstance(v, str) else str(v)


class WeightedGraph:
    """Symmetric edge weights over an ordered finite vertex set.

    Edges are stored once per unordered pair; weighted degrees are
    precomputed.  Instances are immutable and safe to share.
    """

    def __init__(self, vertices: Sequence, edges: Iterable[tuple]):
        verts = tuple(_as_vertex(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise UnknownVertexError("duplicate vertex identifiers", vertices=verts)
        index = {v: i for i, v in enumerate(verts)}

        pairs: dict[tuple[str, str], float] = {}
        for x, y, w in edges:
            x, y = _as_vertex(x), _as_vertex(y)
            if x not in index:
                raise UnknownVertexError(f"unknown vertex {x!r} in edge list", vertex=x)
            if y not in index:
                raise UnknownVertexError(f"unknown vertex {y!r} in edge list", vertex=y)
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise NegativeWeightError(
                    f"edge ({x!r},{y!r}) has invalid weight {w}", x=x, y=y, weight=w
                )
            if x == y:
                if w > 0:
                    raise SelfLoopError(f"self-loop at {x!r} with weight {w}", vertex=x)
                continue
            key = (x, y) if index[x] < index[y] else (y, x)
            if key in pairs and pairs[key] != w:
                raise AsymmetricDuplicateError(
                    f"conflicting weights for edge {key}: {pairs[key]} vs {w}",
                    x=key[0], y=key[1], first=pairs[key], second=w,
                )
            if w > 0:
                pairs[key] = w

        self._vertices = verts
        self._index = index
        self._pairs = pairs

        n = len(verts)
        degrees = np.zeros(n)
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for (x, y), w in pairs.items():
            i, j = index[x], index[y]
            degrees[i] += w
            degrees[j] += w
            adjacency[i].append(j)
            adjacency[j].append(i)
        self._degrees = degrees
        self._adjacency = tuple(tuple(sorted(a)) for a in adjacency)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    def index(self, x) -> int:
        x = _as_vertex(x)
        try:
            return self._index[x]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {x!r}", vertex=x) from None

    def __contains__(self, x) -> bool:
        return _as_vertex(x) in self._index

    def weight(self, x, y) -> float:
        i, j = self.index(x), self.index(y)
        if i == j:
            return 0.0
        key = (self._vertices[i], self._vertices[j]) if i < j else (self._vertices[j], self._vertices[i])
        return self._pairs.get(key, 0.0)

    def degree(self, x) -> float:
        """Weighted degree: the sum of edge weights at ``x``."""
        return float(self._degrees[self.index(x)])

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees.copy()

    def neighbors(self, x) -> tuple[str, ...]:
        return tuple(self._vertices[j] for j in self._adjacency[self.index(x)])

    def edges(self) -> Iterable[tuple[str, str, float]]:
        """Each positive-weight edge once, as (x, y, weight)."""
        for (x, y), w in sorted(self._pairs.items(), key=lambda kv: (self._index[kv[0][0]], self._index[kv[0][1]])):
            yield x, y, w

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        """Dense symmetric matrix B with B[i,j] = b(v_i, v_j)."""
        n = self.n
        B = np.zeros((n, n))
        for (x, y), w in self._pairs.items():
            i, j = self._index[x], self._index[y]
            B[i, j] = w
            B[j, i] = w
        B.flags.writeable = False
        return B

    @cached_property
    def laplacian_matrix(self) -> np.ndarray:
        """Unweighted-by-measure Laplacian: diag(degrees) - weight matrix."""
        L = np.diag(self._degrees) - self.weight_matrix
        L.flags.writeable = False
        return L

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._pairs == other._pairs

    def __hash__(self):
        return hash((self._vertices, tuple(sorted(self._pairs.items()))))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={len(self._pairs)})"


class Measure:
    """Strictly positive vertex measure with finite total mass."""

    def __init__(self, values: Mapping):
        vals = {}
        for v, m in values.items():
            v = _as_vertex(v)
            m = float(m)
            if not math.isfinite(m) or m <= 0:
                raise NonPositiveMeasureError(
                    f"measure must be strictly positive and finite, got m({v!r}) = {m}",
                    vertex=v, value=m,
                )
            vals[v] = m
        self._values = vals
        self._total = float(sum(vals.values()))

    @property
    def values(self) -> dict[str, float]:
        return dict(self._values)

    @property
    def total(self) -> float:
        return self._total

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self._values)

    def __getitem__(self, x) -> float:
        x = _as_vertex(x)
        try:
            return self._values[x]
        except KeyError:
            raise UnknownVertexError(f"measure not defined at {x!r}", vertex=x) from None

    def __contains__(self, x) -> bool:
        return _as_vertex(x) in self._values

    def restrict(self, vertices: Iterable) -> "Measure":
        return Measure({v: self[v] for v in vertices})

    def to_vector(self, order: Sequence[str]) -> np.ndarray:
        if set(order) != set(self._values):
            raise DomainMismatchError(
                "measure domain does not match the requested vertex set",
                missing=sorted(set(order) - set(self._values)),
                extra=sorted(set(self._values) - set(order)),
            )
        return np.array([self._values[v] for v in order])

    @classmethod
    def uniform(cls, vertices: Iterable, value: float = 1.0) -> "Measure":
        return cls({v: value for v in vertices})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        return self._values == other._values

    def __hash__(self):
        return hash(tuple(sorted(self._values.items())))

    def __repr__(self):
        return f"Measure(n={len(self._values)}, total={self._total:g})"


class SubgraphClosure:
    """Interior set, its vertex boundary, and the induced closure graph.

    The closure graph keeps every weight with at least one endpoint in the
    interior and zeroes all boundary-boundary weights.  Construction
    enforces connectivity of the closure graph.
    """

    def __init__(self, interior: Sequence[str], boundary: Sequence[str],
                 graph: WeightedGraph, measure: Measure):
        self._interior = tuple(interior)
        self._boundary = tuple(boundary)
        self._graph = graph
        self._measure = measure
        self._interior_set = frozenset(self._interior)
        self._boundary_set = frozenset(self._boundary)

    @property
    def interior(self) -> tuple[str, ...]:
        return self._interior

    @property
    def boundary(self) -> tuple[str, ...]:
        return self._boundary

    @property
    def closure(self) -> tuple[str, ...]:
        return self._graph.vertices

    @property
    def graph(self) -> WeightedGraph:
        return self._graph

    @property
    def measure(self) -> Measure:
        return self._measure

    @property
    def interior_set(self) -> frozenset[str]:
        return self._interior_set

    @property
    def boundary_set(self) -> frozenset[str]:
        return self._boundary_set

    def is_boundary(self, x) -> bool:
        return _as_vertex(x) in self._boundary_set

    def boundary_measure(self) -> Measure:
        """The ambient measure restricted to the boundary."""
        return self._measure.restrict(self._boundary)

    def __repr__(self):
        return (f"SubgraphClosure(interior={len(self._interior)}, "
                f"boundary={len(self._boundary)})")


def build_graph(vertices: Sequence, edges: Iterable[tuple]) -> WeightedGraph:
    """Build a graph from a vertex list and (x, y, weight) triples.

    Weights are symmetrized (an edge given once is stored both ways).
    Positive self-loops, negative weights, conflicting duplicates and
    unknown endpoints are rejected.
    """
    return WeightedGraph(vertices, edges)


def is_connected(g: WeightedGraph) -> bool:
    """True iff every vertex pair is joined by a chain of positive weights."""
    n = g.n
    if n == 0:
        return True
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        i = queue.popleft()
        for j in g._adjacency[i]:
            if not seen[j]:
                seen[j] = True
                count += 1
                queue.append(j)
    return count == n


def _check_interior(g: WeightedGraph, interior: Iterable) -> list[str]:
    aset = {_as_vertex(v) for v in interior}
    if not aset:
        raise EmptyInteriorError("interior vertex set is empty")
    for v in aset:
        if v not in g:
            raise UnknownVertexError(f"interior vertex {v!r} not in graph", vertex=v)
    if aset == set(g.vertices):
        raise InteriorIsWholeGraphError(
            "interior equals the whole vertex set; no boundary exists"
        )
    return [v for v in g.vertices if v in aset]


def vertex_boundary(g: WeightedGraph, interior: Iterable) -> tuple[str, ...]:
    """Vertices outside the interior with a positive-weight edge into it."""
    A = _check_interior(g, interior)
    aset = set(A)
    out = []
    for v in g.vertices:
        if v in aset:
            continue
        if any(u in aset for u in g.neighbors(v)):
            out.append(v)
    return tuple(out)


def closure_subgraph(g: WeightedGraph, interior: Iterable, m: Measure) -> SubgraphClosure:
    """Closure of an interior set: induced graph with boundary-boundary
    weights removed, plus the measure restricted to the closure.

    Raises ``DisconnectedClosureError`` if the induced graph is not
    connected; the boundary-value machinery assumes it is.
    """
    A = _check_interior(g, interior)
    boundary = vertex_boundary(g, A)
    aset = set(A)
    closure_order = list(A) + list(boundary)

    # any positive edge with one endpoint interior has its other endpoint in
    # the closure by definition of the vertex boundary
    edges = [(x, y, w) for x, y, w in g.edges() if x in aset or y in aset]
    induced = WeightedGraph(closure_order, edges)
    if not is_connected(induced):
        raise DisconnectedClosureError(
            "closure graph is disconnected (boundary-boundary edges removed)",
            interior=A, boundary=list(boundary),
        )
    try:
        m_closure = m.restrict(closure_order)
    except UnknownVertexError as e:
        raise DomainMismatchError(
            "measure is not defined on the whole closure", cause=str(e)
        ) from e
    return SubgraphClosure(A, boundary, induced, m_closure)
