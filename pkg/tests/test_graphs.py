import pytest
from hypothesis import given, settings, strategies as st

from gcoh.graphs import (
    WeightedGraph,
    bipartition,
    components,
    edge_boundary,
    find_odd_cycle,
    full_subgraph,
    graph_from_json,
    graph_to_json,
    p_valuation,
    reduce_graph,
    reduction,
    subgraph_of,
)


def k3_27_1_3():
    return WeightedGraph({"R": 27, "G": 1, "B": 3},
                         [("R", "G"), ("R", "B"), ("G", "B")])


def test_p_valuation_examples():
    assert p_valuation(27, 3) == 3
    assert p_valuation(1, 5) == 0
    assert p_valuation(24, 2) == 3


def test_p_valuation_rejects_bad_input():
    with pytest.raises(ValueError):
        p_valuation(0, 3)
    with pytest.raises(ValueError):
        p_valuation(12, 4)


def test_graph_rejects_loops_multiedges_and_bad_weights():
    with pytest.raises(ValueError):
        WeightedGraph({"a": 1}, [("a", "a")])
    with pytest.raises(ValueError):
        WeightedGraph({"a": 1, "b": 1}, [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        WeightedGraph({"a": 0, "b": 1}, [("a", "b")])
    with pytest.raises(ValueError):
        WeightedGraph({"a": 1}, [("a", "b")])


def test_components_examples():
    g = WeightedGraph({v: 1 for v in "abcd"}, [("a", "b"), ("c", "d")])
    comps = components(full_subgraph(g))
    assert [c.vertices for c in comps] == [("a", "b"), ("c", "d")]

    tri = WeightedGraph({v: 1 for v in "abc"}, [("a", "b"), ("b", "c"), ("a", "c")])
    assert len(components(full_subgraph(tri))) == 1

    iso = WeightedGraph({v: 1 for v in "xyz"}, [])
    assert [c.vertices for c in components(full_subgraph(iso))] == [
        ("x",), ("y",), ("z",)]


def test_bipartition_examples():
    edge = WeightedGraph({"u": 1, "v": 1}, [("u", "v")])
    b = bipartition(full_subgraph(edge))
    assert b is not None and b("u") == 1 and b("v") == -1

    tri = WeightedGraph({v: 1 for v in "abc"}, [("a", "b"), ("b", "c"), ("a", "c")])
    assert bipartition(full_subgraph(tri)) is None

    path = WeightedGraph({"u": 2, "v": 3, "w": 2}, [("u", "v"), ("v", "w")])
    b = bipartition(full_subgraph(path))
    assert (b("u"), b("v"), b("w")) == (1, -1, 1)


def test_odd_cycle_witness():
    tri = WeightedGraph({v: 1 for v in "abc"}, [("a", "b"), ("b", "c"), ("a", "c")])
    cyc = find_odd_cycle(full_subgraph(tri))
    assert cyc is not None and len(cyc) % 2 == 1
    # every consecutive pair (cyclically) is an edge
    edges = set(full_subgraph(tri).edge_set)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert tuple(sorted((a, b))) in edges

    square = WeightedGraph({v: 1 for v in "abcd"},
                           [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
    assert find_odd_cycle(full_subgraph(square)) is None


def test_reduction_examples():
    # K3 on R,G,B with weights 27,1,3 at p=3: edge valuations RG:3, RB:4, GB:1
    g = k3_27_1_3()
    assert reduce_graph(g, 3, 3).edges == (("B", "G"),)
    assert reduce_graph(g, 3, 4).edges == (("B", "G"), ("G", "R"))
    assert reduce_graph(g, 3, 5).edges == (("B", "G"), ("B", "R"), ("G", "R"))


def test_reduction_monotone_and_stabilizes():
    g = k3_27_1_3()
    prev = frozenset()
    for s in range(1, 7):
        cur = reduce_graph(g, 3, s).edge_set
        assert prev <= cur
        prev = cur
    assert reduce_graph(g, 3, 5).edge_set == frozenset(g.edges)


def test_edge_boundary_examples():
    g = k3_27_1_3()
    comp = subgraph_of(g, ["G", "B"], [("G", "B")])
    assert edge_boundary(comp) == frozenset({("G", "R"), ("B", "R")})
    assert edge_boundary(full_subgraph(g)) == frozenset()
    single = subgraph_of(g, ["R"], [])
    assert edge_boundary(single) == frozenset({("G", "R"), ("B", "R")})


def test_subgraph_closure_enforced():
    g = k3_27_1_3()
    with pytest.raises(ValueError):
        subgraph_of(g, ["R"], [("R", "G")])


def test_json_round_trip():
    g = k3_27_1_3()
    doc = graph_to_json(g)
    assert doc["vertices"][0] == {"id": "B", "weight": "3"}
    h = graph_from_json(doc)
    assert h.vertices == g.vertices
    assert h.edges == g.edges
    assert h.weight == g.weight


def test_json_big_weights_survive():
    g = WeightedGraph({"a": 10**40 + 7, "b": 2}, [("a", "b")])
    h = graph_from_json(graph_to_json(g))
    assert h.weight["a"] == 10**40 + 7


@st.composite
def random_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    names = [f"v{i}" for i in range(n)]
    weights = {v: draw(st.integers(min_value=1, max_value=200)) for v in names}
    all_pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = [e for e in all_pairs if draw(st.booleans())]
    return WeightedGraph(weights, chosen)


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_components_partition(g):
    comps = components(full_subgraph(g))
    seen = [v for c in comps for v in c.vertex_set]
    assert sorted(seen) == list(g.vertices)
    edge_union = [e for c in comps for e in c.edge_set]
    assert sorted(edge_union) == list(g.edges)


@settings(max_examples=60, deadline=None)
@given(random_graphs(), st.sampled_from([2, 3, 5]))
def test_bipartition_or_odd_cycle(g, p):
    sub = full_subgraph(g)
    b = bipartition(sub)
    if b is None:
        cyc = find_odd_cycle(sub)
        assert cyc is not None and len(cyc) % 2 == 1
        edges = set(sub.edge_set)
        for a, c in zip(cyc, cyc[1:] + cyc[:1]):
            assert tuple(sorted((a, c))) in edges
    else:
        assert b.is_valid_for(sub)
        for comp in components(sub):
            assert b(comp.min_vertex()) == 1


@settings(max_examples=40, deadline=None)
@given(random_graphs(), st.sampled_from([2, 3]), st.integers(1, 6))
def test_reduction_monotone_property(g, p, s):
    a = reduction(full_subgraph(g), p, s)
    b = reduction(full_subgraph(g), p, s + 1)
    assert a.edge_set <= b.edge_set
    assert all(g.edge_valuation(e, p) < s for e in a.edge_set)
