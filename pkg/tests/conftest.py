import pytest

import gneumann as gn
from gneumann.fixtures import path_graph


@pytest.fixture
def two_vertex():
    g = path_graph(2)
    return g, gn.Measure.uniform(g.vertices)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def p3_closure(p3):
    return gn.closure_subgraph(p3, ["2"], gn.Measure.uniform(p3.vertices))


@pytest.fixture
def p3_phi(p3_closure):
    return gn.BoundaryData.for_closure(p3_closure, {"1": 1.0, "3": -1.0})
