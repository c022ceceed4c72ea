from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingcx.graphcore import (
    GraphFormatError,
    IsingInstance,
    Multigraph,
    UnionFind,
    connected_components,
    degrees,
    disjoint_union,
    graph_file_from,
    parse_graph,
    serialize_graph,
)
from isingcx.numerics import ROU, Cyclo, Real, parse_weight_spec
from isingcx.partition import z_ising

from conftest import naive_components

TRIANGLE = Multigraph(3, ((0, 1), (1, 2), (0, 2)))


def test_parse_k2_defaults():
    gf = parse_graph("graph 2\nedge 0 1\n")
    assert gf.graph == Multigraph(2, ((0, 1),))
    inst = gf.to_ising(default_edge=Cyclo.rational(3))
    assert inst.phi == (3,) and inst.tau == (1, 1)


def test_parse_override_and_fields():
    gf = parse_graph("graph 3 default_edge real(1/2)\nedge 0 1\nedge 1 2\nedge 0 2 rou(1,4)\nfield 1 rou(1,8)\nterminals 0 2 # c\n")
    inst = gf.to_ising()
    assert inst.phi[2] == Cyclo.root_of_unity(1, 4)
    assert inst.phi[0] == Cyclo.rational(1) / 2
    assert inst.tau == (1, Cyclo.root_of_unity(1, 8), 1)
    assert gf.terminals == (0, 2)


@pytest.mark.parametrize(
    "text",
    [
        "graph 2\nedge 0 5\n",
        "edge 0 1\n",
        "graph 2\ngraph 2\n",
        "graph x\n",
        "graph 2\nedge 0\n",
        "graph 2\nfield 0 rou(1)\n",
        "graph 2\nfield 0 real(1)\nfield 0 real(2)\n",
        "graph 2\nterminals 0\n",
        "graph 2\nbogus 1\n",
        "",
    ],
)
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_missing_edge_weight_is_an_error():
    with pytest.raises(GraphFormatError):
        parse_graph("graph 2\nedge 0 1\n").interactions()


@st.composite
def graph_files(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(0, 6))
    edges = tuple((draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for _ in range(m))
    specs = st.sampled_from([None, ROU(1, 4), ROU(3, 8), Real(-2)])
    weights = [draw(specs) for _ in range(m)]
    fields = {v: ROU(1, 8) for v in range(n) if draw(st.booleans())}
    default = draw(st.sampled_from([None, ROU(1, 16)]))
    terms = (0, n - 1) if n > 1 and draw(st.booleans()) else None
    return graph_file_from(Multigraph(n, edges), weights, fields, default, terms)


@settings(max_examples=60, deadline=None)
@given(graph_files())
def test_serialize_round_trip(gf):
    back = parse_graph(serialize_graph(gf))
    assert back.graph == gf.graph
    assert back.edge_weights == gf.edge_weights
    assert back.fields == gf.fields
    assert back.default_edge == gf.default_edge
    assert back.terminals == gf.terminals


def test_components_examples():
    assert connected_components(TRIANGLE, []) == 3
    assert connected_components(TRIANGLE) == 1
    assert connected_components(TRIANGLE, [0]) == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=10))
def test_components_match_reference(n, raw):
    edges = tuple((u % n, v % n) for u, v in raw)
    g = Multigraph(n, edges)
    assert connected_components(g) == naive_components(n, edges)


def test_union_find_undo():
    uf = UnionFind(4)
    uf.union(0, 1)
    uf.union(1, 0)
    uf.union(2, 3)
    assert uf.components == 2
    uf.undo()
    uf.undo()
    assert uf.components == 3 and uf.find(0) == uf.find(1)


def test_degrees_count_loops_twice():
    assert degrees(Multigraph(2, ((0, 0), (0, 1)))) == [3, 1]


def test_disjoint_union():
    k2 = Multigraph(2, ((0, 1),))
    two = disjoint_union(k2, 2)
    assert (two.n, two.m) == (4, 2)
    assert disjoint_union(TRIANGLE, 1) == TRIANGLE
    y = Cyclo.root_of_unity(1, 4)
    assert z_ising(IsingInstance.uniform(two, y)) == (2 * y + 2) ** 2


def test_instance_validation():
    with pytest.raises(ValueError):
        IsingInstance(TRIANGLE, (1, 1), (1, 1, 1))
    with pytest.raises(GraphFormatError):
        Multigraph(2, ((0, 2),))
    assert parse_weight_spec("rou(1,4)") == ROU(1, 4)
