"""Synthetic dependency graphs.

``planted_roles`` builds a graph with known core / popular / supplementary
roles; ``preferential_dag`` builds an npm-like acyclic graph whose new
packages prefer already popular dependencies.
"""

from __future__ import annotations

import numpy as np

from .graph import DependencyGraph
from .sampling import make_rng


def planted_roles(
    seed: int = 0,
    n_core: int = 10,
    n_popular: int = 40,
    n_supplementary: int = 450,
    framework_users: float = 0.4,
    shuffle: bool = True,
) -> tuple[DependencyGraph, dict[str, str]]:
    """Graph with planted roles and the true role of every label.

    - core packages have dependents only;
    - popular packages depend on 5-10 cores and are used by add-ons;
    - supplementary packages depend on 1-3 cores; a ``framework_users``
      share of them also depend on one popular package.

    Every core is used by popular packages and by both kinds of add-on, and
    every popular package has at least one add-on, so the planted roles are
    regular.
    """
    rng = make_rng(seed)
    n_users = int(round(framework_users * n_supplementary))
    if n_core < 1 or n_popular < n_core or n_users < n_popular or n_supplementary - n_users < n_core:
        raise ValueError("role sizes too small to keep every role regular")
    labels = (
        [f"core-{i:03d}" for i in range(n_core)]
        + [f"popular-{i:03d}" for i in range(n_popular)]
        + [f"addon-{i:03d}" for i in range(n_supplementary)]
    )
    truth = {lab: lab.split("-")[0].replace("addon", "supplementary") for lab in labels}
    core = np.arange(n_core)
    popular = n_core + np.arange(n_popular)
    users = n_core + n_popular + np.arange(n_users)
    plain = n_core + n_popular + np.arange(n_users, n_supplementary)

    edges: set[tuple[int, int]] = set()

    def depend(src, pool, lo, hi, must=None):
        k = int(rng.integers(lo, hi + 1))
        picks = set(rng.choice(pool, size=min(k, len(pool)), replace=False).tolist())
        if must is not None:
            picks.add(int(must))
        edges.update((int(src), int(t)) for t in picks)

    for i, p in enumerate(popular):
        depend(p, core, 5, 10, must=core[i % n_core])
    for i, u in enumerate(users):
        depend(u, popular, 0, 0, must=popular[i % n_popular])
        depend(u, core, 1, 3, must=core[i % n_core])
    for i, u in enumerate(plain):
        depend(u, core, 1, 3, must=core[i % n_core])

    n = len(labels)
    perm = rng.permutation(n) if shuffle else np.arange(n)
    g = DependencyGraph([labels[i] for i in perm])
    where = np.empty(n, dtype=np.int64)
    where[perm] = np.arange(n)
    for u, v in sorted(edges):
        g.add_edge(int(where[u]), int(where[v]))
    return g.freeze(), truth


def preferential_dag(n: int = 1000, mean_deps: float = 8.0, seed: int = 0) -> DependencyGraph:
    """Acyclic graph where package ``i`` depends on earlier packages.

    Dependency counts are Poisson around ``mean_deps`` (capped by the number
    of earlier packages); targets are drawn with weight ``in_degree + 1``.
    """
    rng = make_rng(seed)
    g = DependencyGraph([f"pkg-{i:05d}" for i in range(n)])
    weight = np.ones(n)
    for i in range(1, n):
        k = min(i, int(rng.poisson(mean_deps)))
        if k == 0:
            continue
        p = weight[:i] / weight[:i].sum()
        targets = rng.choice(i, size=k, replace=False, p=p)
        for t in targets:
            g.add_edge(i, int(t))
        weight[targets] += 1
    return g.freeze()
