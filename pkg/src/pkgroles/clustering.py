"""k-medoids (PAM) over a dissimilarity matrix, silhouettes and k selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .matrix import DissimilarityMatrix
from .sampling import make_rng

SWAP_TOL = 1e-12


class ClusteringError(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    """Medoids in ascending id order; cluster ``c`` is the one of ``medoids[c]``."""

    k: int
    medoids: np.ndarray
    assignment: np.ndarray
    cost: float
    cost_history: list[float] = field(default_factory=list, repr=False)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == c)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)


def assign(D: np.ndarray, medoids: np.ndarray) -> np.ndarray:
    """Nearest medoid per node, lowest medoid index on ties; medoids keep themselves."""
    assignment = np.argmin(D[:, medoids], axis=1)
    assignment[medoids] = np.arange(len(medoids))
    return assignment


def pam(m: DissimilarityMatrix, k: int, seed: int = 0, init: str = "build",
        max_iter: int = 10_000) -> Clustering:
    """Partitioning Around Medoids.

    ``init="build"`` uses the greedy BUILD start (deterministic);
    ``init="random"`` draws ``k`` distinct starting medoids from
    ``Generator(PCG64(seed))``. SWAP then runs to a local optimum.
    """
    D = np.ascontiguousarray(m.values)
    n = D.shape[0]
    if not 1 <= k <= n:
        raise ClusteringError(f"k={k} must be in [1, {n}]")
    if init == "build":
        start = _kernels.pam_build(D, k)
    elif init == "random":
        start = make_rng(seed).choice(n, size=k, replace=False).astype(np.int64)
    else:
        raise ClusteringError(f"unknown init {init!r}")
    medoids, costs = _kernels.pam_swap(D, start, SWAP_TOL, max_iter)
    medoids = np.sort(np.asarray(medoids, dtype=np.int64))
    assignment = assign(D, medoids)
    cost = float(D[np.arange(n), medoids[assignment]].sum())
    return Clustering(k, medoids, assignment, cost, list(costs))


@dataclass(frozen=True)
class SilhouetteReport:
    per_node: np.ndarray
    per_cluster_mean: np.ndarray
    overall_mean: float


def silhouette(m: DissimilarityMatrix, c: Clustering) -> SilhouetteReport:
    """Silhouette widths; nodes in singleton clusters get 0."""
    D = m.values
    n = D.shape[0]
    if c.assignment.shape != (n,):
        raise ClusteringError("clustering does not match matrix size")
    if c.k < 2:
        raise ClusteringError("silhouette undefined for one cluster")
    onehot = np.zeros((n, c.k))
    onehot[np.arange(n), c.assignment] = 1.0
    sizes = onehot.sum(axis=0)
    sums = D @ onehot
    own = c.assignment
    own_size = sizes[own]
    a = np.zeros(n)
    multi = own_size > 1
    a[multi] = sums[multi, own[multi]] / (own_size[multi] - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        means = sums / sizes
    means[:, sizes == 0] = np.inf
    means[np.arange(n), own] = np.inf
    b = means.min(axis=1)
    s = np.zeros(n)
    lt = multi & (a < b)
    gt = multi & (a > b)
    s[lt] = 1.0 - a[lt] / b[lt]
    s[gt] = b[gt] / a[gt] - 1.0
    per_cluster = np.array([
        s[own == j].mean() if sizes[j] else 0.0 for j in range(c.k)
    ])
    return SilhouetteReport(s, per_cluster, float(s.mean()))


@dataclass(frozen=True)
class SweepEntry:
    k: int
    clustering: Clustering
    silhouette: float | None


@dataclass(frozen=True)
class Sweep:
    entries: list[SweepEntry]

    @property
    def best(self) -> SweepEntry:
        """Highest mean silhouette; lowest k on ties. k=1 only if it is alone."""
        scored = [e for e in self.entries if e.silhouette is not None]
        if not scored:
            return self.entries[0]
        return max(scored, key=lambda e: (e.silhouette, -e.k))

    def __iter__(self):
        return iter(self.entries)


def k_sweep(m: DissimilarityMatrix, k_range, seed: int = 0, init: str = "build") -> Sweep:
    ks = [k for k in k_range]
    if not ks:
        raise ClusteringError("empty k range")
    entries = []
    for k in ks:
        if not 1 <= k <= m.n:
            raise ClusteringError(f"k={k} outside [1, {m.n}]")
        c = pam(m, k, seed=seed, init=init)
        s = silhouette(m, c).overall_mean if k >= 2 else None
        entries.append(SweepEntry(k, c, s))
    return Sweep(entries)
