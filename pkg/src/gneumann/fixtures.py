"""Tiny built-in graph families used by the self-tests."""

from __future__ import annotations

from .graphs import WeightedGraph, build_graph

__all__ = ["path_graph", "cycle_graph", "complete_graph", "star_graph"]


def _names(n: int) -> list[str]:
    return [str(i + 1) for i in range(n)]


def path_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    names = _names(n)
    return build_graph(names, [(names[i], names[i + 1], weight) for i in range(n - 1)])


def cycle_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    names = _names(n)
    edges = [(names[i], names[(i + 1) % n], weight) for i in range(n)]
    return build_graph(names, edges)


def complete_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    names = _names(n)
    edges = [(names[i], names[j], weight) for i in range(n) for j in range(i + 1, n)]
    return build_graph(names, edges)


def star_graph(n_leaves: int, weight: float = 1.0) -> WeightedGraph:
    names = ["center"] + [f"leaf{i + 1}" for i in range(n_leaves)]
    return build_graph(names, [("center", leaf, weight) for leaf in names[1:]])
