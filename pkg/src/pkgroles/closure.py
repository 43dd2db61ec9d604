"""Descendant closure: add an edge from every package to each package it
transitively depends on.

Reachability is computed on the condensation of the graph (strongly
connected components), so dependency cycles are handled; self-loops are
never emitted.
"""

from __future__ import annotations

import numpy as np

from .graph import DependencyGraph

DEFAULT_EDGE_BUDGET = 50_000_000


class ClosureBudgetError(RuntimeError):
    pass


def strongly_connected_components(g: DependencyGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order: every component
    reachable from ``C`` is listed before ``C``.
    """
    n = g.node_count
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.out_neighbors(v)
            recurse = False
            while pos < len(succ):
                w = succ[pos]
                pos += 1
                if index[w] == -1:
                    work.append((v, pos))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def descendant_sets(g: DependencyGraph) -> list[int]:
    """Per-node descendant bitsets as Python ints (bit ``v`` set = reachable)."""
    comps = strongly_connected_components(g)
    comp_of = [0] * g.node_count
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    member_bits = [sum(1 << v for v in members) for members in comps]
    reach = [0] * len(comps)
    for c, members in enumerate(comps):
        bits = member_bits[c] if len(members) > 1 else 0
        for v in members:
            for w in g.out_neighbors(v):
                d = comp_of[w]
                if d != c:
                    bits |= member_bits[d] | reach[d]
        reach[c] = bits
    return [reach[comp_of[v]] & ~(1 << v) for v in range(g.node_count)]


def _bits_to_indices(bits: int, n: int) -> np.ndarray:
    if bits == 0:
        return np.empty(0, dtype=np.int64)
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:n])


def descendant_closure(
    g: DependencyGraph, edge_budget: int = DEFAULT_EDGE_BUDGET
) -> DependencyGraph:
    """Graph with edge ``(u, v)`` iff ``v != u`` is reachable from ``u`` in ``g``.

    Raises
    ------
    ClosureBudgetError
        If the closed graph would hold more than ``edge_budget`` edges.
    """
    g.freeze()
    n = g.node_count
    desc = descendant_sets(g)
    total = sum(d.bit_count() for d in desc)
    if total > edge_budget:
        raise ClosureBudgetError(
            f"closure would have {total} edges (budget {edge_budget}); "
            "sample the graph before closing it"
        )
    closed = DependencyGraph(g.labels, g.external)
    for u in range(n):
        for v in _bits_to_indices(desc[u], n):
            closed.add_edge(u, int(v))
    return closed.freeze()
