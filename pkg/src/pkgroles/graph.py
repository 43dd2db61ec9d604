"""Directed dependency graph shared by every analysis module.

An edge ``u -> v`` means "package ``u`` depends on package ``v``". Node ids
are dense integers ``0..n-1``; labels are unique package names. A graph is
mutable while it is being built and read-only once :meth:`freeze` has been
called (all analyses freeze their inputs).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised on invalid graph construction or queries."""


class DependencyGraph:
    """Directed graph with sorted out- and in-adjacency.

    Parameters
    ----------
    labels : int or sequence of str
        Either a node count (labels default to ``"0".."n-1"``) or the
        package names in NodeId order.
    external : iterable of int, optional
        Ids of placeholder nodes that were referenced but not defined.
    """

    def __init__(self, labels: int | Sequence[str] = 0, external: Iterable[int] = ()):
        if isinstance(labels, int):
            labels = [str(i) for i in range(labels)]
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._out: list[set[int]] = []
        self._in: list[set[int]] = []
        self._frozen = False
        self._edge_count = 0
        self._csr_cache: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        self._out_sorted: list[tuple[int, ...]] | None = None
        self._in_sorted: list[tuple[int, ...]] | None = None
        for label in labels:
            self.add_node(label)
        self.external = set(external)

    # -- construction -----------------------------------------------------

    def add_node(self, label: str) -> int:
        """Append a node and return its id."""
        self._check_mutable()
        if label in self._index:
            raise GraphError(f"duplicate label {label!r}")
        idx = len(self._labels)
        self._labels.append(label)
        self._index[label] = idx
        self._out.append(set())
        self._in.append(set())
        return idx

    def add_edge(self, source: int, target: int) -> "DependencyGraph":
        """Add ``source -> target``; repeating an existing edge is a no-op."""
        self._check_mutable()
        self._check_id(source)
        self._check_id(target)
        if source == target:
            raise GraphError(f"self-loop on node {source}")
        if target not in self._out[source]:
            self._out[source].add(target)
            self._in[target].add(source)
            self._edge_count += 1
        return self

    def freeze(self) -> "DependencyGraph":
        if not self._frozen:
            self._out_sorted = [tuple(sorted(s)) for s in self._out]
            self._in_sorted = [tuple(sorted(s)) for s in self._in]
            self.external = frozenset(self.external)
            self._frozen = True
        return self

    @classmethod
    def from_edges(
        cls,
        labels: int | Sequence[str],
        edges: Iterable[tuple[int, int]],
        external: Iterable[int] = (),
    ) -> "DependencyGraph":
        g = cls(labels, external)
        for u, v in edges:
            g.add_edge(u, v)
        return g.freeze()

    @classmethod
    def from_label_edges(cls, edges: Iterable[tuple[str, str]]) -> "DependencyGraph":
        """Build from name pairs, assigning ids in first-appearance order."""
        g = cls()
        for a, b in edges:
            u = g._index.get(a)
            if u is None:
                u = g.add_node(a)
            v = g._index.get(b)
            if v is None:
                v = g.add_node(b)
            g.add_edge(u, v)
        return g.freeze()

    def _check_mutable(self) -> None:
        if self._frozen:
            raise GraphError("graph is frozen")

    def _check_id(self, v: int) -> None:
        if not 0 <= v < len(self._labels):
            raise GraphError(f"node id {v} out of range for {len(self._labels)} nodes")

    # -- queries ----------------------------------------------------------

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def node_count(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def labels(self) -> list[str]:
        return list(self._labels)

    def label(self, v: int) -> str:
        return self._labels[v]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown label {label!r}") from None

    def is_external(self, v: int) -> bool:
        return v in self.external

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        """Dependencies of ``v`` in ascending id order."""
        self._check_id(v)
        if self._out_sorted is not None:
            return self._out_sorted[v]
        return tuple(sorted(self._out[v]))

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        """Dependents of ``v`` in ascending id order."""
        self._check_id(v)
        if self._in_sorted is not None:
            return self._in_sorted[v]
        return tuple(sorted(self._in[v]))

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Undirected view: ``out(v) | in(v)``, derived on demand."""
        self._check_id(v)
        return tuple(sorted(self._out[v] | self._in[v]))

    def has_edge(self, u: int, v: int) -> bool:
        self._check_id(u)
        self._check_id(v)
        return v in self._out[u]

    def degree(self, v: int, direction: str = "total") -> int:
        """Degree of ``v``; ``direction`` is ``'in'``, ``'out'`` or ``'total'``.

        ``'total'`` is ``in + out``; on a graph without reciprocal edges this
        equals the undirected degree.
        """
        self._check_id(v)
        if direction == "out":
            return len(self._out[v])
        if direction == "in":
            return len(self._in[v])
        if direction == "total":
            return len(self._out[v]) + len(self._in[v])
        raise GraphError(f"unknown direction {direction!r}")

    def out_degrees(self) -> np.ndarray:
        return np.fromiter((len(s) for s in self._out), dtype=np.int64, count=len(self))

    def in_degrees(self) -> np.ndarray:
        return np.fromiter((len(s) for s in self._in), dtype=np.int64, count=len(self))

    def edges(self) -> list[tuple[int, int]]:
        """All edges sorted by ``(source, target)``."""
        return [(u, v) for u in range(len(self)) for v in self.out_neighbors(u)]

    def csr(self, view: str = "out") -> tuple[np.ndarray, np.ndarray]:
        """Compressed sparse rows ``(indptr, indices)`` of a frozen graph.

        ``view`` selects ``'out'``, ``'in'`` or ``'undirected'`` adjacency.
        Row slices are sorted ascending.
        """
        if not self._frozen:
            raise GraphError("csr() requires a frozen graph")
        cached = self._csr_cache.get(view)
        if cached is not None:
            return cached
        if view == "out":
            rows: Sequence[Sequence[int]] = self._out_sorted
        elif view == "in":
            rows = self._in_sorted
        elif view == "undirected":
            rows = [self.neighbors(v) for v in range(len(self))]
        else:
            raise GraphError(f"unknown view {view!r}")
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        indices = np.fromiter(
            (x for r in rows for x in r), dtype=np.int64, count=int(indptr[-1])
        )
        self._csr_cache[view] = (indptr, indices)
        return indptr, indices

    def induced_subgraph(self, nodes: Iterable[int]) -> "DependencyGraph":
        """Subgraph on ``nodes``, reindexed in ascending original-id order."""
        keep = sorted(set(nodes))
        if not keep:
            raise GraphError("induced subgraph needs at least one node")
        for v in keep:
            self._check_id(v)
        remap = {v: i for i, v in enumerate(keep)}
        sub = DependencyGraph(
            [self._labels[v] for v in keep],
            external=(remap[v] for v in keep if v in self.external),
        )
        for v in keep:
            for w in self._out[v]:
                j = remap.get(w)
                if j is not None:
                    sub.add_edge(remap[v], j)
        return sub.freeze()

    def undirected(self) -> "DependencyGraph":
        """Symmetric copy with both orientations of every edge."""
        g = DependencyGraph(self._labels, self.external)
        for u, v in self.edges():
            g.add_edge(u, v)
            g.add_edge(v, u)
        return g.freeze()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return self._labels == other._labels and self._out == other._out

    def __repr__(self) -> str:
        return f"DependencyGraph(nodes={self.node_count}, edges={self.edge_count})"


def add_edge(g: DependencyGraph, source: int, target: int) -> DependencyGraph:
    return g.add_edge(source, target)


def degree(g: DependencyGraph, v: int, direction: str = "total") -> int:
    return g.degree(v, direction)


def induced_subgraph(g: DependencyGraph, nodes: Iterable[int]) -> DependencyGraph:
    return g.induced_subgraph(nodes)
