# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled hot loops. Must stay output-identical to ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort

cnp.import_array()


def predecessor_pairs(const int64_t[:] nbr_ptr, const int64_t[:] nbr_idx,
                      const int64_t[:] pred_ptr, const int64_t[:] pred_idx):
    """Score every pair of nodes that shares at least one neighbour.

    For each node ``i`` in id order, walks its neighbours and their
    predecessors ``j > i``, counting one shared neighbour per visit. Only
    pairs reached through a shared neighbour are touched. Returns
    ``(a, b, common)`` sorted by ``(a, b)`` with ``a < b``.
    """
    cdef int64_t n = nbr_ptr.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] cnt_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[:] cnt = cnt_arr
    cdef vector[int64_t] touched
    cdef vector[int64_t] out_a, out_b, out_c
    cdef int64_t i, x, k, y, j, t
    with nogil:
        for i in range(n):
            for x in range(nbr_ptr[i], nbr_ptr[i + 1]):
                k = nbr_idx[x]
                # predecessor lists are sorted: scan from the end down to i
                y = pred_ptr[k + 1] - 1
                while y >= pred_ptr[k]:
                    j = pred_idx[y]
                    if j <= i:
                        break
                    if cnt[j] == 0:
                        touched.push_back(j)
                    cnt[j] += 1
                    y -= 1
            sort(touched.begin(), touched.end())
            for t in range(<int64_t>touched.size()):
                j = touched[t]
                out_a.push_back(i)
                out_b.push_back(j)
                out_c.push_back(cnt[j])
                cnt[j] = 0
            touched.clear()
    cdef Py_ssize_t m = out_a.size()
    a = np.empty(m, dtype=np.int64)
    b = np.empty(m, dtype=np.int64)
    c = np.empty(m, dtype=np.int64)
    cdef int64_t[:] av = a, bv = b, cv = c
    cdef Py_ssize_t s
    for s in range(m):
        av[s] = out_a[s]
        bv[s] = out_b[s]
        cv[s] = out_c[s]
    return a, b, c


def pam_build(const double[:, ::1] D, int k):
    """Greedy BUILD: 1-median first, then the largest cost reduction."""
    cdef Py_ssize_t n = D.shape[0], o, h, t
    cdef cnp.ndarray[double, ndim=1] dn_arr = np.empty(n)
    cdef double[:] dn = dn_arr
    cdef cnp.ndarray[uint8_t, ndim=1] is_med_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[:] is_med = is_med_arr
    cdef double s, best, gain, diff
    cdef Py_ssize_t best_h = 0
    medoids = []
    best = 0.0
    for h in range(n):
        s = 0.0
        for o in range(n):
            s += D[o, h]
        if h == 0 or s < best:
            best = s
            best_h = h
    medoids.append(best_h)
    is_med[best_h] = 1
    for o in range(n):
        dn[o] = D[o, best_h]
    for t in range(1, k):
        best = -1.0
        best_h = -1
        for h in range(n):
            if is_med[h]:
                continue
            gain = 0.0
            for o in range(n):
                diff = dn[o] - D[o, h]
                if diff > 0:
                    gain += diff
            if gain > best:
                best = gain
                best_h = h
        medoids.append(best_h)
        is_med[best_h] = 1
        for o in range(n):
            if D[o, best_h] < dn[o]:
                dn[o] = D[o, best_h]
    return np.asarray(medoids, dtype=np.int64)


cdef double _nearest(const double[:, ::1] D, int64_t[:] med, Py_ssize_t k,
                     int64_t[:] near, double[:] dn, double[:] ds) noexcept nogil:
    cdef Py_ssize_t n = D.shape[0], o, i
    cdef double d, cost = 0.0, d1, d2
    cdef int64_t p
    for o in range(n):
        d1 = 1e300
        d2 = 1e300
        p = 0
        for i in range(k):
            d = D[o, med[i]]
            if d < d1:
                d2 = d1
                d1 = d
                p = i
            elif d < d2:
                d2 = d
        for i in range(k):
            if med[i] == o:
                p = i
        near[o] = p
        dn[o] = d1
        ds[o] = d2
        cost += d1
    return cost


def pam_swap(const double[:, ::1] D, medoids, double tol, int max_iter):
    """SWAP phase: apply the best improving medoid/non-medoid exchange
    until none lowers the cost by more than ``tol``.

    Returns the final medoids and the cost after every accepted swap
    (first entry is the starting cost).
    """
    cdef Py_ssize_t n = D.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] med_arr = np.array(medoids, dtype=np.int64)
    cdef int64_t[:] med = med_arr
    cdef Py_ssize_t k = med.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] near_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[:] near = near_arr
    cdef cnp.ndarray[double, ndim=1] dn_arr = np.empty(n), ds_arr = np.empty(n)
    cdef double[:] dn = dn_arr, ds = ds_arr
    cdef cnp.ndarray[double, ndim=1] acc_arr = np.empty(k)
    cdef double[:] acc = acc_arr
    cdef cnp.ndarray[uint8_t, ndim=1] is_med_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[:] is_med = is_med_arr
    cdef Py_ssize_t h, o, i, best_i, best_h, it
    cdef double shared, doh, best, delta, a, b, cost
    for i in range(k):
        is_med[med[i]] = 1
    cost = _nearest(D, med, k, near, dn, ds)
    costs = [cost]
    for it in range(max_iter):
        best = 0.0
        best_i = -1
        best_h = -1
        with nogil:
            for h in range(n):
                if is_med[h]:
                    continue
                shared = 0.0
                for i in range(k):
                    acc[i] = 0.0
                for o in range(n):
                    doh = D[o, h]
                    a = doh - dn[o]
                    if a > 0:
                        a = 0.0
                    shared += a
                    b = doh if doh < ds[o] else ds[o]
                    acc[near[o]] += b - dn[o] - a
                for i in range(k):
                    delta = shared + acc[i]
                    if best_i < 0 or delta < best:
                        best = delta
                        best_i = i
                        best_h = h
        if best_i < 0 or not best < -tol:
            break
        is_med[med[best_i]] = 0
        med[best_i] = best_h
        is_med[best_h] = 1
        cost = _nearest(D, med, k, near, dn, ds)
        costs.append(cost)
    return med_arr, costs
