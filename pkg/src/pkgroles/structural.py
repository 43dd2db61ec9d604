"""Structural equivalence by Salton cosine over shared neighbourhoods.

Only pairs that share at least one neighbour are scored: for every node the
pairs of its predecessors are compared, and each pair is scored once. Pairs
with equal neighbourhoods are contracted into one representative (the
smallest member id) instead of being given a similarity edge.

By default a node's neighbourhood is its set of out-neighbours, i.e. its
dependencies, in the descendant-closed graph. ``neighborhood="undirected"``
uses ``out | in`` instead, which is the reading used for small textbook
graphs drawn without arrows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .graph import DependencyGraph
from .matrix import DissimilarityMatrix

DEFAULT_PAIR_BUDGET = 1_000_000


class StructuralError(ValueError):
    pass


class PairBudgetError(RuntimeError):
    pass


class SimilarityEdge(NamedTuple):
    a: int
    b: int
    cosine: float


@dataclass(frozen=True)
class ContractionMap:
    """Maps every node to the representative of its identical-neighbourhood class."""

    representative: tuple[int, ...]
    class_members: dict[int, tuple[int, ...]] = field(repr=False)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "ContractionMap":
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(int(a)), find(int(b))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        rep = tuple(find(v) for v in range(n))
        members: dict[int, list[int]] = {}
        for v, r in enumerate(rep):
            members.setdefault(r, []).append(v)
        return cls(rep, {r: tuple(m) for r, m in members.items()})

    @property
    def representatives(self) -> list[int]:
        """Surviving node ids in ascending order."""
        return sorted(self.class_members)

    def nontrivial_classes(self) -> list[tuple[int, ...]]:
        return [m for _, m in sorted(self.class_members.items()) if len(m) > 1]

    @property
    def contracted_node_count(self) -> int:
        """Nodes that belong to a class of two or more."""
        return sum(len(m) for m in self.class_members.values() if len(m) > 1)


def _views(g: DependencyGraph, neighborhood: str):
    g.freeze()
    if neighborhood == "out":
        return g.csr("out"), g.csr("in")
    if neighborhood == "undirected":
        u = g.csr("undirected")
        return u, u
    raise StructuralError(f"unknown neighborhood {neighborhood!r}")


def cosine_similarity(g: DependencyGraph, i: int, j: int, neighborhood: str = "out") -> float:
    """``|N(i) & N(j)| / sqrt(|N(i)| * |N(j)|)``."""
    if neighborhood == "out":
        ni, nj = g.out_neighbors(i), g.out_neighbors(j)
    elif neighborhood == "undirected":
        ni, nj = g.neighbors(i), g.neighbors(j)
    else:
        raise StructuralError(f"unknown neighborhood {neighborhood!r}")
    if not ni or not nj:
        raise StructuralError(f"undefined similarity: node {i if not ni else j} has no neighbours")
    common = len(set(ni).intersection(nj))
    return common / math.sqrt(len(ni) * len(nj))


def scored_pairs(
    g: DependencyGraph, neighborhood: str = "out", pair_budget: int = DEFAULT_PAIR_BUDGET
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All pairs sharing a neighbour as arrays ``(a, b, common, cosine)``.

    Raises
    ------
    PairBudgetError
        If some node has more than ``pair_budget`` predecessor pairs.
    """
    (nptr, nidx), (pptr, pidx) = _views(g, neighborhood)
    p = np.diff(pptr)
    worst = int(np.max(p * (p - 1) // 2)) if len(p) else 0
    if worst > pair_budget:
        hub = int(np.argmax(p))
        raise PairBudgetError(
            f"node {g.label(hub)!r} has {worst} predecessor pairs (budget {pair_budget}); "
            "sample the graph first"
        )
    a, b, common = _kernels.predecessor_pairs(nptr, nidx, pptr, pidx)
    deg = np.diff(nptr)
    cosine = common / np.sqrt(deg[a].astype(np.float64) * deg[b])
    return a, b, common, cosine


@dataclass(frozen=True)
class StructuralResult:
    matrix: DissimilarityMatrix
    contraction: ContractionMap
    nodes: list[int]
    edges: list[SimilarityEdge]
    scored_pairs: int
    identical_pairs: int


def _similarity_arrays(g, neighborhood, pair_budget):
    a, b, common, cosine = scored_pairs(g, neighborhood, pair_budget)
    deg = np.diff(_views(g, neighborhood)[0][0])
    identical = (common == deg[a]) & (common == deg[b])
    cmap = ContractionMap.from_pairs(g.node_count, zip(a[identical], b[identical]))
    rep = np.asarray(cmap.representative, dtype=np.int64)
    ra, rb = rep[a[~identical]], rep[b[~identical]]
    cos = cosine[~identical]
    lo, hi = np.minimum(ra, rb), np.maximum(ra, rb)
    keep = lo != hi
    lo, hi, cos = lo[keep], hi[keep], cos[keep]
    keys, first = np.unique(lo * g.node_count + hi, return_index=True)
    return lo[first], hi[first], cos[first], cmap, len(a), int(identical.sum())


def structural_similarity_graph(
    g_closed: DependencyGraph,
    neighborhood: str = "out",
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> tuple[list[SimilarityEdge], ContractionMap]:
    """Similarity edges between contracted representatives, plus the contraction."""
    lo, hi, cos, cmap, _, _ = _similarity_arrays(g_closed, neighborhood, pair_budget)
    edges = [SimilarityEdge(int(x), int(y), float(s)) for x, y, s in zip(lo, hi, cos)]
    return edges, cmap


def to_dissimilarity(edges, n: int) -> DissimilarityMatrix:
    """``1 - cosine`` for scored pairs, 1 for every other distinct pair."""
    if n < 1:
        raise StructuralError("matrix needs at least one node")
    d = np.ones((n, n))
    for a, b, s in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise StructuralError(f"edge ({a}, {b}) out of range for n={n}")
        d[a, b] = d[b, a] = 1.0 - s
    np.fill_diagonal(d, 0.0)
    return DissimilarityMatrix(np.clip(d, 0.0, 1.0))


def structural_dissimilarity(
    g_closed: DependencyGraph,
    neighborhood: str = "out",
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> StructuralResult:
    """Full structural step: score, contract, and build the matrix over representatives.

    Row ``i`` of the matrix corresponds to node ``nodes[i]`` of ``g_closed``.
    """
    lo, hi, cos, cmap, n_scored, n_identical = _similarity_arrays(
        g_closed, neighborhood, pair_budget
    )
    nodes = cmap.representatives
    pos = np.full(g_closed.node_count, -1, dtype=np.int64)
    pos[nodes] = np.arange(len(nodes))
    r = len(nodes)
    d = np.ones((r, r))
    d[pos[lo], pos[hi]] = 1.0 - cos
    d[pos[hi], pos[lo]] = 1.0 - cos
    np.fill_diagonal(d, 0.0)
    edges = [SimilarityEdge(int(x), int(y), float(s)) for x, y, s in zip(lo, hi, cos)]
    return StructuralResult(
        matrix=DissimilarityMatrix(np.clip(d, 0.0, 1.0)),
        contraction=cmap,
        nodes=nodes,
        edges=edges,
        scored_pairs=n_scored,
        identical_pairs=n_identical,
    )
