"""Symmetric dissimilarity matrix consumed by clustering and reporting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric ``n x n`` grid of values in ``[0, 1]`` with zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] == 0:
            raise MatrixError(f"expected a non-empty square matrix, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise MatrixError("matrix contains non-finite values")
        if np.any(np.diag(v) != 0):
            raise MatrixError("diagonal must be zero")
        if not np.array_equal(v, v.T):
            raise MatrixError("matrix is not symmetric")
        if v.min() < 0 or v.max() > 1:
            raise MatrixError("entries must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, ij):
        return self.values[ij]

    def permuted(self, order) -> "DissimilarityMatrix":
        order = np.asarray(order)
        return DissimilarityMatrix(self.values[np.ix_(order, order)])
