"""Random-walk node sampling.

The walk moves over the undirected view of the graph, restarts at a
uniformly random node with probability ``restart_probability`` and always
restarts at nodes without neighbours. Randomness comes from numpy's
``Generator(PCG64(seed))``; the same graph and spec give the same sample.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graph import DependencyGraph


class SamplingError(ValueError):
    pass


class SampleExhaustedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SampleSpec:
    target_nodes: int
    restart_probability: float = 0.15
    seed: int = 0
    max_steps: int | None = None

    def __post_init__(self):
        if self.target_nodes <= 0:
            raise SamplingError("target_nodes must be positive")
        if not 0.0 <= self.restart_probability <= 1.0:
            raise SamplingError("restart_probability must be in [0, 1]")
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", 100 * self.target_nodes)
        if self.max_steps < self.target_nodes:
            raise SamplingError("max_steps must be >= target_nodes")


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def subseed(master: int, index: int) -> np.random.SeedSequence:
    """Seed for sample ``index``: ``SeedSequence(master, spawn_key=(index,))``.

    This equals ``SeedSequence(master).spawn(index + 1)[index]``, so any
    sample can be regenerated without replaying the others.
    """
    return np.random.SeedSequence(master, spawn_key=(index,))


def random_walk_nodes(g: DependencyGraph, spec: SampleSpec) -> list[int]:
    """Distinct nodes in visiting order."""
    n = g.node_count
    if n == 0:
        raise SamplingError("cannot sample an empty graph")
    if spec.target_nodes > n:
        raise SamplingError(f"target_nodes={spec.target_nodes} exceeds node count {n}")
    indptr, indices = g.csr("undirected")
    rng = make_rng(spec.seed)
    seen = np.zeros(n, dtype=bool)
    order: list[int] = []
    current = int(rng.integers(n))
    for _ in range(spec.max_steps):
        if not seen[current]:
            seen[current] = True
            order.append(current)
            if len(order) == spec.target_nodes:
                break
        lo, hi = indptr[current], indptr[current + 1]
        if hi == lo or rng.random() < spec.restart_probability:
            current = int(rng.integers(n))
        else:
            current = int(indices[lo + rng.integers(hi - lo)])
    if len(order) < spec.target_nodes:
        warnings.warn(
            f"random walk visited {len(order)} of {spec.target_nodes} nodes "
            f"within {spec.max_steps} steps",
            SampleExhaustedWarning,
            stacklevel=2,
        )
    return order


def random_walk_sample(
    g: DependencyGraph, spec: SampleSpec
) -> tuple[frozenset[int], DependencyGraph]:
    """Sample nodes by random walk and return them with their induced subgraph."""
    nodes = random_walk_nodes(g, spec)
    return frozenset(nodes), g.induced_subgraph(nodes)


def sample_statistics(sub: DependencyGraph) -> dict[str, int]:
    return {"nodes": sub.node_count, "edges": sub.edge_count}
