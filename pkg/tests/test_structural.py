import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_pairs_cosine, random_digraph
from pkgroles.closure import descendant_closure
from pkgroles.graph import DependencyGraph
from pkgroles.structural import (PairBudgetError, SimilarityEdge, StructuralError,
                                 cosine_similarity, scored_pairs, structural_dissimilarity,
                                 structural_similarity_graph, to_dissimilarity)


def test_fig3_cosines(fig3):
    a, b, c = (fig3.index_of(x) for x in "abc")
    s_ba = cosine_similarity(fig3, b, a)
    s_ca = cosine_similarity(fig3, c, a)
    assert s_ba == pytest.approx(2 / math.sqrt(6), abs=1e-12)  # 0.8165
    assert s_ca == pytest.approx(1 / math.sqrt(2), abs=1e-12)  # 0.7071
    assert s_ba > s_ca


def test_identical_and_disjoint():
    g = DependencyGraph.from_edges(6, [(0, 2), (0, 3), (1, 2), (1, 3), (4, 5)])
    assert cosine_similarity(g, 0, 1) == 1.0
    assert cosine_similarity(g, 0, 4) == 0.0
    with pytest.raises(StructuralError, match="undefined"):
        cosine_similarity(g, 0, 2)


def test_fig1_undirected_contracts_d_and_e(fig1):
    edges, cmap = structural_similarity_graph(fig1, neighborhood="undirected")
    classes = [{fig1.label(v) for v in cls} for cls in cmap.nontrivial_classes()]
    assert classes == [{"d", "e"}]
    e = fig1.index_of("e")
    assert all(e not in (x.a, x.b) for x in edges)


def test_star_leaves_contract():
    k = 7
    g = DependencyGraph.from_edges(k + 1, [(i, k) for i in range(k)])
    edges, cmap = structural_similarity_graph(g)
    assert cmap.nontrivial_classes() == [tuple(range(k))]
    assert edges == []
    assert cmap.representative == tuple([0] * k + [k])


def test_contraction_map_idempotent(fig1):
    _, cmap = structural_similarity_graph(fig1, neighborhood="undirected")
    rep = cmap.representative
    assert all(rep[rep[v]] == rep[v] for v in range(len(rep)))


def test_fig3_dissimilarity(fig3):
    a, b = fig3.index_of("a"), fig3.index_of("b")
    res = structural_dissimilarity(fig3)
    pos = {v: i for i, v in enumerate(res.nodes)}
    assert res.matrix[pos[a], pos[b]] == pytest.approx(1 - 2 / math.sqrt(6), abs=1e-12)  # 0.1835


def test_to_dissimilarity_conventions():
    m = to_dissimilarity([SimilarityEdge(0, 1, 1.0), SimilarityEdge(1, 2, 0.25)], 4)
    assert m[0, 1] == 0.0
    assert m[1, 2] == 0.75
    assert m[0, 3] == 1.0
    assert np.all(np.diag(m.values) == 0)
    with pytest.raises(StructuralError):
        to_dissimilarity([SimilarityEdge(0, 5, 0.5)], 4)


def test_pair_budget():
    g = DependencyGraph.from_edges(6, [(i, 5) for i in range(5)])
    with pytest.raises(PairBudgetError, match="sample"):
        scored_pairs(g, pair_budget=9)
    assert len(scored_pairs(g, pair_budget=10)[0]) == 10


def test_monotone_guard():
    # N(c) < N(a) < N(b): a raw common-neighbour count cannot tell b from a perfect match
    g = DependencyGraph.from_label_edges(
        [("a", "x"), ("a", "y"), ("b", "x"), ("b", "y"), ("b", "z"), ("c", "x")]
    )
    a, b = g.index_of("a"), g.index_of("b")
    assert cosine_similarity(g, a, b) < 1


def _random_graph(seed, n, p, closed=True):
    rng = np.random.default_rng(seed)
    g = DependencyGraph.from_edges(n, random_digraph(rng, n, p))
    return descendant_closure(g) if closed else g


def test_random_50_node_graph_matches_brute_force(kernels):
    g = _random_graph(3, 50, 0.05, closed=False)
    a, b, _, cos = scored_pairs(g)
    got = {(int(x), int(y)): s for x, y, s in zip(a, b, cos)}
    want = all_pairs_cosine(50, [g.out_neighbors(v) for v in range(50)])
    assert got.keys() == want.keys()
    assert max(abs(got[k] - want[k]) for k in want) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.floats(0.02, 0.3), st.integers(0, 2**32 - 1), st.booleans())
def test_structural_invariants(n, p, seed, undirected):
    hood = "undirected" if undirected else "out"
    g = _random_graph(seed, n, p, closed=not undirected)
    nb = [g.neighbors(v) if undirected else g.out_neighbors(v) for v in range(n)]
    a, b, _, cos = scored_pairs(g, hood)
    # scored exactly once, exactly the qualifying pairs
    keys = list(zip(a.tolist(), b.tolist()))
    assert len(keys) == len(set(keys))
    assert set(keys) == set(all_pairs_cosine(n, nb))
    assert np.all((cos >= 0) & (cos <= 1))
    # cosine 1 iff neighbourhoods are equal
    for (x, y), s in zip(keys, cos):
        assert (s == 1.0) == (set(nb[x]) == set(nb[y]))
    res = structural_dissimilarity(g, hood)
    m = res.matrix.values
    assert np.array_equal(m, m.T) and np.all(np.diag(m) == 0)
    # no two surviving nodes with equal non-empty neighbourhoods
    seen = {}
    for v in res.nodes:
        if nb[v]:
            key = tuple(nb[v])
            assert key not in seen
            seen[key] = v
    # every class shares one neighbourhood
    for members in res.contraction.class_members.values():
        assert len({tuple(nb[v]) for v in members}) == 1


def test_symmetry_of_cosine():
    g = _random_graph(9, 30, 0.1)
    for i in range(30):
        for j in range(30):
            if g.out_neighbors(i) and g.out_neighbors(j):
                assert cosine_similarity(g, i, j) == cosine_similarity(g, j, i)
        if g.out_neighbors(i):
            assert cosine_similarity(g, i, i) == pytest.approx(1.0, abs=1e-15)
