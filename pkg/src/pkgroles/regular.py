"""Regular equivalence by categorical iterative role refinement (CATREGE).

Every node starts in one role. At each iteration a role is split by the
neighbour-type profile of its members: the set of roles among a node's
in-neighbours and the set of roles among its out-neighbours. Refinement
stops when no role splits. The first iteration therefore separates nodes by
the presence of in- and out-connections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DependencyGraph
from .matrix import DissimilarityMatrix

DEFAULT_NODE_CAP = 2000


class RegularError(ValueError):
    pass


@dataclass(frozen=True)
class RolePartition:
    """Result of :func:`catrege`.

    ``assignment[t]`` holds the role of every node after iteration ``t``
    (``assignment[0]`` is all zeros). ``split`` is an ``n x n`` array with
    the iteration at which a pair first separated, 0 if it never did.
    """

    assignment: list[np.ndarray]
    split: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.assignment[-1]

    @property
    def total_iterations(self) -> int:
        return len(self.assignment) - 1

    @property
    def role_count(self) -> int:
        return int(self.final.max()) + 1

    def split_iteration(self, i: int, j: int) -> int | None:
        t = int(self.split[i, j])
        return t or None

    def classes(self) -> list[list[int]]:
        """Final roles as sorted member lists, ordered by role id."""
        out: list[list[int]] = [[] for _ in range(self.role_count)]
        for v, r in enumerate(self.final):
            out[r].append(v)
        return out


def _canonical(keys: list) -> np.ndarray:
    """Role ids numbered in order of each role's smallest member."""
    ids: dict = {}
    out = np.empty(len(keys), dtype=np.int64)
    for v, key in enumerate(keys):
        out[v] = ids.setdefault(key, len(ids))
    return out


def catrege(g: DependencyGraph, node_cap: int | None = DEFAULT_NODE_CAP) -> RolePartition:
    """Refine roles until every role has members with identical profiles.

    Parameters
    ----------
    node_cap : int or None
        Refuse graphs with more nodes unless ``None``.
    """
    n = g.node_count
    if n == 0:
        raise RegularError("graph has no nodes")
    if node_cap is not None and n > node_cap:
        raise RegularError(
            f"{n} nodes exceeds the CATREGE node cap of {node_cap}; "
            "sample the graph or raise the cap explicitly"
        )
    g.freeze()
    outs = [g.out_neighbors(v) for v in range(n)]
    ins = [g.in_neighbors(v) for v in range(n)]
    roles = np.zeros(n, dtype=np.int64)
    history = [roles]
    split = np.zeros((n, n), dtype=np.int64)
    while True:
        r = roles.tolist()
        keys = [
            (r[v], frozenset(r[u] for u in ins[v]), frozenset(r[w] for w in outs[v]))
            for v in range(n)
        ]
        new = _canonical(keys)
        if new.max() == roles.max():
            break
        t = len(history)
        was_same = roles[:, None] == roles[None, :]
        now_diff = new[:, None] != new[None, :]
        split[was_same & now_diff] = t
        roles = new
        history.append(roles)
    return RolePartition(history, split)


def regular_dissimilarity(p: RolePartition, form: str = "inverse") -> DissimilarityMatrix:
    """Distance from the iteration at which two nodes were separated.

    ``form="inverse"``: ``1 / t``. ``form="linear"``: ``(T - t + 1) / T``
    with ``T`` the total number of iterations. Both give 0 for nodes in
    the same final role and shrink as the split happens later.
    """
    t = p.split.astype(np.float64)
    d = np.zeros_like(t)
    mask = t > 0
    if form == "inverse":
        d[mask] = 1.0 / t[mask]
    elif form == "linear":
        T = p.total_iterations
        d[mask] = (T - t[mask] + 1.0) / T
    else:
        raise RegularError(f"unknown distance form {form!r}")
    return DissimilarityMatrix(d)
