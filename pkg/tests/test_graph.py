import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkgroles.graph import DependencyGraph, GraphError


def test_add_edge_updates_both_views():
    g = DependencyGraph(2).add_edge(0, 1)
    assert g.out_neighbors(0) == (1,)
    assert g.in_neighbors(1) == (0,)


def test_add_edge_is_idempotent():
    g = DependencyGraph(2).add_edge(0, 1).add_edge(0, 1)
    assert g.edge_count == 1


@pytest.mark.parametrize("u,v", [(0, 0), (0, 2), (-1, 0)])
def test_add_edge_rejects_bad_ids(u, v):
    with pytest.raises(GraphError):
        DependencyGraph(2).add_edge(u, v)


def test_frozen_graph_rejects_edits():
    g = DependencyGraph(2).freeze()
    with pytest.raises(GraphError):
        g.add_edge(0, 1)


def test_duplicate_labels_rejected():
    with pytest.raises(GraphError):
        DependencyGraph(["x", "x"])


def test_degrees_on_figures(fig1, fig3):
    assert fig1.degree(fig1.index_of("b"), "total") == 3
    assert fig1.degree(fig1.index_of("b"), "out") == 2
    assert fig1.degree(fig1.index_of("b"), "in") == 1
    assert fig3.degree(fig3.index_of("a"), "total") == 2
    assert DependencyGraph(1).degree(0) == 0
    with pytest.raises(GraphError):
        fig1.degree(99)


def test_induced_subgraph_fig1(fig1):
    ids = {fig1.index_of(x) for x in "bde"}
    sub = fig1.induced_subgraph(ids)
    assert sub.labels == ["b", "d", "e"]
    assert sorted((sub.label(u), sub.label(v)) for u, v in sub.edges()) == [("b", "d"), ("b", "e")]


def test_induced_subgraph_identity_and_edgeless(fig1):
    assert fig1.induced_subgraph(range(fig1.node_count)) == fig1
    sub = fig1.induced_subgraph([fig1.index_of("d"), fig1.index_of("e")])
    assert sub.node_count == 2 and sub.edge_count == 0
    with pytest.raises(GraphError):
        fig1.induced_subgraph([])


def test_csr_is_sorted(fig3):
    indptr, indices = fig3.csr("out")
    for v in range(fig3.node_count):
        row = indices[indptr[v]:indptr[v + 1]]
        assert list(row) == sorted(row) == list(fig3.out_neighbors(v))


edge_lists = st.integers(2, 12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])),
    )
)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_degree_sums_and_adjacency_symmetry(data):
    n, edges = data
    g = DependencyGraph.from_edges(n, edges)
    assert g.out_degrees().sum() == g.in_degrees().sum() == g.edge_count == len(set(edges))
    for u in range(n):
        for v in g.out_neighbors(u):
            assert u in g.in_neighbors(v)
        for w in g.in_neighbors(u):
            assert u in g.out_neighbors(w)
    assert g.induced_subgraph(range(n)) == g
