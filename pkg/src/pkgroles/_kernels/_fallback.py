"""Pure-Python (numpy/scipy) versions of the compiled kernels.

Same signatures and tie-breaking as ``_ext``; used when the extension is
not built or when ``PKGROLES_PURE_PYTHON`` is set.
"""

import numpy as np
from scipy import sparse


def predecessor_pairs(nbr_ptr, nbr_idx, pred_ptr, pred_idx):
    """Pairs sharing at least one neighbour with their common-neighbour count.

    Vectorized as the upper triangle of ``A @ A.T``; the pair set is the
    one the per-node predecessor walk discovers, since ``(i, j)`` is
    reachable from a picked node ``k`` exactly when ``k`` is a common
    neighbour of both.
    """
    n = len(nbr_ptr) - 1
    data = np.ones(len(nbr_idx), dtype=np.int64)
    adj = sparse.csr_matrix((data, nbr_idx, nbr_ptr), shape=(n, n))
    common = sparse.triu(adj @ adj.T, k=1).tocoo()
    keep = common.data > 0
    a, b, c = common.row[keep], common.col[keep], common.data[keep]
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    c = c.astype(np.int64)
    order = np.lexsort((b, a))
    return a[order], b[order], c[order]


def pam_build(D, k):
    n = D.shape[0]
    first = int(np.argmin(D.sum(axis=0)))
    medoids = [first]
    is_med = np.zeros(n, dtype=bool)
    is_med[first] = True
    dn = D[:, first].copy()
    for _ in range(1, k):
        gain = np.maximum(dn[:, None] - D, 0.0).sum(axis=0)
        gain[is_med] = -np.inf
        h = int(np.argmax(gain))
        medoids.append(h)
        is_med[h] = True
        np.minimum(dn, D[:, h], out=dn)
    return np.asarray(medoids, dtype=np.int64)


def _nearest(D, med):
    dm = D[:, med]
    k = len(med)
    if k == 1:
        near = np.zeros(D.shape[0], dtype=np.int64)
        dn = dm[:, 0].copy()
        ds = np.full(D.shape[0], 1e300)
    else:
        near = np.argmin(dm, axis=1)
        part = np.sort(dm, axis=1)
        dn, ds = part[:, 0].copy(), part[:, 1].copy()
    near[med] = np.arange(k)
    return near, dn, ds


def pam_swap(D, medoids, tol, max_iter):
    n = D.shape[0]
    med = np.array(medoids, dtype=np.int64)
    k = len(med)
    near, dn, ds = _nearest(D, med)
    costs = [float(dn.sum())]
    for _ in range(max_iter):
        cand = np.ones(n, dtype=bool)
        cand[med] = False
        hs = np.flatnonzero(cand)
        if hs.size == 0:
            break
        Dh = D[:, hs]
        a = np.minimum(Dh - dn[:, None], 0.0)
        extra = np.minimum(Dh, ds[:, None]) - dn[:, None] - a
        onehot = np.zeros((n, k))
        onehot[np.arange(n), near] = 1.0
        delta = a.sum(axis=0)[:, None] + extra.T @ onehot
        flat = int(np.argmin(delta))
        hpos, i = divmod(flat, k)
        if not delta[hpos, i] < -tol:
            break
        med[i] = hs[hpos]
        near, dn, ds = _nearest(D, med)
        costs.append(float(dn.sum()))
    return med, costs
