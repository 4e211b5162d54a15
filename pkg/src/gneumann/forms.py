"""Energy form, graph Laplacians, and the boundary normal derivative.

All evaluations are exact dense sums; no thresholding of small weights.
Functions defined on the wrong vertex set are a hard error, never
zero-extended.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainMismatchError
from .graphs import Measure, SubgraphClosure, WeightedGraph

__all__ = [
    "VertexFunction",
    "energy",
    "energy_bilinear",
    "formal_laplacian",
    "interior_laplacian",
    "normal_derivative",
    "markov_contraction",
]


@dataclass(frozen=True)
class VertexFunction:
    """Real-valued function on a stated vertex set."""

    values: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "values", {str(k): float(v) for k, v in self.values.items()})

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.values)

    def __getitem__(self, x) -> float:
        return self.values[str(x)]

    def to_vector(self, order: Sequence[str]) -> np.ndarray:
        """Values in the given vertex order; the domains must coincide."""
        if set(order) != set(self.values):
            raise DomainMismatchError(
                "function domain does not match the expected vertex set",
                missing=sorted(set(order) - set(self.values)),
                extra=sorted(set(self.values) - set(order)),
            )
        return np.array([self.values[v] for v in order])

    @classmethod
    def from_vector(cls, order: Sequence[str], vec) -> "VertexFunction":
        vec = np.asarray(vec, dtype=float)
        if len(order) != vec.shape[0]:
            raise DomainMismatchError("vector length does not match vertex order")
        return cls(dict(zip(order, vec.tolist())))


def _as_function(f) -> VertexFunction:
    if isinstance(f, VertexFunction):
        return f
    return VertexFunction(dict(f))


def energy(g: WeightedGraph, u) -> float:
    """Dirichlet energy: half the weighted sum of squared differences
    over all ordered vertex pairs."""
    uv = _as_function(u).to_vector(g.vertices)
    total = 0.0
    for x, y, w in g.edges():
        d = uv[g.index(x)] - uv[g.index(y)]
        total += w * d * d
    return total  # each unordered pair counted once = half the ordered sum


def energy_bilinear(g: WeightedGraph, u, v) -> float:
    """Polarized energy form; symmetric, and equal to ``energy`` on the
    diagonal."""
    uv = _as_function(u).to_vector(g.vertices)
    vv = _as_function(v).to_vector(g.vertices)
    total = 0.0
    for x, y, w in g.edges():
        i, j = g.index(x), g.index(y)
        total += w * (uv[i] - uv[j]) * (vv[i] - vv[j])
    return total


def formal_laplacian(g: WeightedGraph, m: Measure, f) -> VertexFunction:
    """Measure-normalized graph Laplacian applied pointwise:
    (1/m(x)) * sum_y b(x,y) (f(x) - f(y))."""
    fv = _as_function(f).to_vector(g.vertices)
    mv = m.to_vector(g.vertices)
    out = (g.laplacian_matrix @ fv) / mv
    return VertexFunction.from_vector(g.vertices, out)


def interior_laplacian(sub: SubgraphClosure, f) -> VertexFunction:
    """Laplacian on the closure graph, forced to zero on the boundary."""
    lf = formal_laplacian(sub.graph, sub.measure, f)
    vals = lf.values
    for y in sub.boundary:
        vals[y] = 0.0
    return VertexFunction(vals)


def normal_derivative(sub: SubgraphClosure, u) -> VertexFunction:
    """Pointwise normal derivative on the boundary:
    (1/m(x)) * sum_{y interior} b(x,y) (u(x) - u(y)).

    On the closure graph the sum over interior neighbors equals the sum
    over all neighbors, since boundary-boundary weights vanish.
    """
    g = sub.graph
    uv = _as_function(u).to_vector(g.vertices)
    out = {}
    for x in sub.boundary:
        i = g.index(x)
        acc = 0.0
        for y in g.neighbors(x):
            acc += g.weight(x, y) * (uv[i] - uv[g.index(y)])
        out[x] = acc / sub.measure[x]
    return VertexFunction(out)


def markov_contraction(u) -> VertexFunction:
    """Pointwise clamp to [0, 1]; never increases the energy."""
    f = _as_function(u)
    return VertexFunction({x: min(1.0, max(0.0, v)) for x, v in f.values.items()})
