"""Blockmodels, 2-D embeddings and role labels for clustered samples."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from os import PathLike

import numpy as np

from .clustering import Clustering
from .graph import DependencyGraph
from .matrix import DissimilarityMatrix

ROLES = ("core", "popular", "supplementary", "other")
DEFAULT_PURITY = 0.9


@dataclass(frozen=True)
class BlockModel:
    order: np.ndarray
    reordered: DissimilarityMatrix
    block_mean: np.ndarray
    cluster_order: np.ndarray
    boundaries: np.ndarray


def cluster_order(c: Clustering) -> np.ndarray:
    """Clusters by size descending, then by medoid id."""
    sizes = c.sizes()
    return np.array(sorted(range(c.k), key=lambda j: (-sizes[j], int(c.medoids[j]))), dtype=np.int64)


def blockmodel(m: DissimilarityMatrix, c: Clustering) -> BlockModel:
    """Permute ``m`` so each cluster is contiguous and average every block.

    Diagonal blocks average the off-diagonal entries only; a singleton
    cluster's diagonal block mean is 0.
    """
    if c.assignment.shape != (m.n,):
        raise ValueError("clustering does not match matrix size")
    corder = cluster_order(c)
    order = np.concatenate([c.members(j) for j in corder])
    D = m.values
    means = np.zeros((c.k, c.k))
    for x, cx in enumerate(corder):
        mx = c.members(cx)
        for y, cy in enumerate(corder):
            my = c.members(cy)
            block = D[np.ix_(mx, my)]
            if cx == cy:
                cnt = len(mx) * (len(mx) - 1)
                means[x, y] = block.sum() / cnt if cnt else 0.0
            else:
                means[x, y] = block.mean()
    bounds = np.cumsum([len(c.members(j)) for j in corder])
    return BlockModel(order, m.permuted(order), means, corder, bounds)


def write_pgm(bm: BlockModel, path: str | PathLike) -> None:
    """Plain (P2) 8-bit PGM level plot: dissimilarity 0 is black, 1 is white."""
    v = np.rint(bm.reordered.values * 255).astype(np.int64)
    n = v.shape[0]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"P2\n{n} {n}\n255\n")
        for row in v:
            fh.write(" ".join(map(str, row)) + "\n")


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray
    eigenvalues: np.ndarray
    captured: float


def embed_2d(m: DissimilarityMatrix) -> Embedding:
    """Classical MDS into two dimensions.

    ``captured`` is the share of the positive eigenvalue mass held by the
    two retained axes.
    """
    D = m.values
    n = D.shape[0]
    if n < 3:
        raise ValueError("embedding needs at least 3 points")
    J = np.eye(n) - 1.0 / n
    B = -0.5 * J @ (D ** 2) @ J
    B = (B + B.T) / 2
    evals, evecs = np.linalg.eigh(B)
    idx = np.argsort(evals)[::-1]
    evals, evecs = evals[idx], evecs[:, idx]
    scale = max(1.0, float(np.abs(evals).max()))
    positive = evals > 1e-10 * scale
    coords = np.zeros((n, 2))
    top = [i for i in range(2) if positive[i]]
    if len(top) < 2:
        warnings.warn("fewer than 2 positive eigenvalues; degenerate axes set to 0",
                      RuntimeWarning, stacklevel=2)
    for i in top:
        vec = evecs[:, i]
        # fix the sign so the output does not depend on the eigensolver
        pivot = np.argmax(np.abs(vec))
        if vec[pivot] < 0:
            vec = -vec
        coords[:, i] = vec * np.sqrt(evals[i])
    mass = evals[positive].sum()
    captured = float(evals[top].sum() / mass) if mass > 0 else 0.0
    return Embedding(coords, evals, captured)


@dataclass(frozen=True)
class RoleLabel:
    role: str
    in_only: int
    out_only: int
    both: int
    isolated: int
    mean_in: float
    mean_out: float

    @property
    def size(self) -> int:
        return self.in_only + self.out_only + self.both + self.isolated


def classify_roles(
    g: DependencyGraph,
    c: Clustering,
    nodes=None,
    purity: float = DEFAULT_PURITY,
) -> dict[int, RoleLabel]:
    """Label each cluster core / supplementary / popular / other.

    ``nodes[i]`` is the node of ``g`` behind matrix row ``i`` (identity if
    omitted). A cluster is ``core`` when at least ``purity`` of its members
    only have dependents, ``supplementary`` when they only have
    dependencies, ``popular`` when they have both and mean out-degree
    exceeds mean in-degree.
    """
    nodes = np.arange(g.node_count) if nodes is None else np.asarray(nodes)
    if len(nodes) != len(c.assignment):
        raise ValueError("clustering does not match node set")
    indeg = g.in_degrees()[nodes]
    outdeg = g.out_degrees()[nodes]
    labels = {}
    for j in range(c.k):
        sel = c.assignment == j
        i, o = indeg[sel], outdeg[sel]
        size = int(sel.sum())
        in_only = int(((i > 0) & (o == 0)).sum())
        out_only = int(((o > 0) & (i == 0)).sum())
        both = int(((i > 0) & (o > 0)).sum())
        isolated = size - in_only - out_only - both
        mean_in = float(i.mean()) if size else 0.0
        mean_out = float(o.mean()) if size else 0.0
        if size and in_only >= purity * size:
            role = "core"
        elif size and out_only >= purity * size:
            role = "supplementary"
        elif size and both >= purity * size and mean_out > mean_in:
            role = "popular"
        else:
            role = "other"
        labels[j] = RoleLabel(role, in_only, out_only, both, isolated, mean_in, mean_out)
    return labels
