import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkgroles.clustering import Clustering, pam
from pkgroles.graph import DependencyGraph
from pkgroles.matrix import DissimilarityMatrix
from pkgroles.regular import catrege, regular_dissimilarity
from pkgroles.report import blockmodel, classify_roles, embed_2d, write_pgm
from pkgroles.synth import planted_roles


def block_matrix(sizes, within, between):
    labels = np.repeat(np.arange(len(sizes)), sizes)
    d = np.where(labels[:, None] == labels[None, :], within, between).astype(float)
    np.fill_diagonal(d, 0)
    return DissimilarityMatrix(d), labels


def pairwise(x):
    return np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1))


def test_blockmodel_two_blocks():
    m, _ = block_matrix([3, 5], 0.1, 0.9)
    bm = blockmodel(m, pam(m, 2))
    assert np.allclose(np.diag(bm.block_mean), 0.1)
    assert np.allclose(bm.block_mean[0, 1], 0.9) and np.allclose(bm.block_mean[1, 0], 0.9)
    # larger cluster first
    assert list(bm.boundaries) == [5, 8]


def test_blockmodel_k1_is_permutation():
    rng = np.random.default_rng(0)
    d = rng.random((6, 6))
    d = np.triu(d, 1)
    m = DissimilarityMatrix(d + d.T)
    bm = blockmodel(m, pam(m, 1))
    assert sorted(bm.order) == list(range(6))
    assert np.array_equal(np.sort(bm.reordered.values.ravel()), np.sort(m.values.ravel()))


def test_blockmodel_contiguous_and_multiset():
    g, _ = planted_roles(seed=3)
    m = regular_dissimilarity(catrege(g))
    c = pam(m, 4)
    bm = blockmodel(m, c)
    labs = c.assignment[bm.order]
    assert all(len(set(labs[a:b])) == 1 for a, b in zip([0, *bm.boundaries[:-1]], bm.boundaries))
    assert np.array_equal(np.sort(bm.reordered.values.ravel()), np.sort(m.values.ravel()))
    k = c.k
    for i in range(k):
        off = [bm.block_mean[i, j] for j in range(k) if j != i]
        assert bm.block_mean[i, i] < min(off)


def test_pgm(tmp_path):
    m, _ = block_matrix([2, 2], 0.0, 1.0)
    bm = blockmodel(m, pam(m, 2))
    write_pgm(bm, tmp_path / "b.pgm")
    lines = (tmp_path / "b.pgm").read_text().splitlines()
    assert lines[:3] == ["P2", "4 4", "255"]
    assert lines[3] == "0 0 255 255"


def test_embed_equilateral():
    m = DissimilarityMatrix(np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], float))
    e = embed_2d(m)
    assert np.allclose(pairwise(e.coords)[np.triu_indices(3, 1)], 1.0, atol=1e-12)
    assert e.captured == pytest.approx(1.0)


def test_embed_all_zero():
    with pytest.warns(RuntimeWarning):
        e = embed_2d(DissimilarityMatrix(np.zeros((4, 4))))
    assert np.all(e.coords == 0)


def test_embed_too_small():
    with pytest.raises(ValueError):
        embed_2d(DissimilarityMatrix(np.zeros((2, 2))))


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 30), st.integers(0, 2**32 - 1))
def test_embed_recovers_planar_points(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    d = pairwise(pts)
    scale = d.max()
    if scale < 1e-3:
        return
    d = d / scale
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0)
    e = embed_2d(DissimilarityMatrix(d))
    assert np.max(np.abs(pairwise(e.coords) - d)) <= 1e-9
    # permutation invariance up to rigid motion
    perm = rng.permutation(n)
    ep = embed_2d(DissimilarityMatrix(d[np.ix_(perm, perm)]))
    assert np.max(np.abs(pairwise(ep.coords) - pairwise(e.coords)[np.ix_(perm, perm)])) <= 1e-9
    assert ep.captured == pytest.approx(e.captured, abs=1e-12)


def _one_cluster(n):
    return Clustering(1, np.array([0]), np.zeros(n, dtype=np.int64), 0.0)


def test_classify_pure_sinks_and_sources():
    # 0..2 sources depend on 3..5 sinks
    g = DependencyGraph.from_edges(6, [(0, 3), (1, 4), (2, 5), (0, 4)])
    c = Clustering(2, np.array([0, 3]), np.array([0, 0, 0, 1, 1, 1]), 0.0)
    roles = classify_roles(g, c)
    assert roles[0].role == "supplementary" and roles[0].out_only == 3
    assert roles[1].role == "core" and roles[1].in_only == 3


def test_classify_popular_and_mixed():
    # node 1 and 2 both depend on two cores and are used once
    g = DependencyGraph.from_edges(
        6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (5, 3)])
    c = Clustering(1, np.array([1]), np.zeros(2, dtype=np.int64), 0.0)
    roles = classify_roles(g, c, nodes=[1, 2])
    assert roles[0].role == "popular"
    mixed = Clustering(1, np.array([0]), np.zeros(4, dtype=np.int64), 0.0)
    roles = classify_roles(g, mixed, nodes=[0, 5, 3, 4])
    assert roles[0].role == "other"
    assert (roles[0].out_only, roles[0].in_only) == (2, 2)


def test_classify_depends_only_on_profiles():
    g, _ = planted_roles(seed=1)
    m = regular_dissimilarity(catrege(g))
    c = pam(m, 4)
    base = {j: (r.role, r.size) for j, r in classify_roles(g, c).items()}
    assert sorted(r for r, _ in base.values()) == ["core", "popular", "supplementary", "supplementary"]
