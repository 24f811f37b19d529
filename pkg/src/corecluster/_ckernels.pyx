# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as ``corecluster._pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def core_numbers(const i64[::1] indptr, const i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, v, u, w, d, md = 0, num, start, pu, pw, du, dv
    deg_arr = np.empty(n, dtype=np.int64)
    if n == 0:
        return deg_arr
    cdef i64[::1] deg = deg_arr
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    cdef i64[::1] bins = np.zeros(md + 1, dtype=np.int64)
    cdef i64[::1] pos = np.empty(n, dtype=np.int64)
    cdef i64[::1] vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        bins[deg[v]] += 1
    start = 0
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            du = deg[u]
            if du > dv:
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] = du - 1
    return deg_arr


def absorb(const i64[::1] indptr, const i64[::1] indices, const i64[::1] coreness,
           i64 level, i64[::1] labels, Py_ssize_t n_clusters, pending,
           double alpha, i64 beta):
    cdef const i64[::1] todo = np.ascontiguousarray(pending, dtype=np.int64)
    cdef i64[::1] counts = np.zeros(max(n_clusters, 1), dtype=np.int64)
    cdef i64[::1] touched = np.empty(max(n_clusters, 1), dtype=np.int64)
    cdef i64[::1] out = np.empty(todo.shape[0], dtype=np.int64)
    cdef Py_ssize_t n_out = 0, t, nt, ii, j, v, u, c, best, best_count, deg
    cdef bint changed = True
    while changed:
        changed = False
        for ii in range(todo.shape[0]):
            v = todo[ii]
            if labels[v] >= 0:
                continue
            deg = 0
            nt = 0
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if coreness[u] < level:
                    continue
                deg += 1
                c = labels[u]
                if c >= 0:
                    if counts[c] == 0:
                        touched[nt] = c
                        nt += 1
                    counts[c] += 1
            best = -1
            best_count = 0
            for t in range(nt):
                c = touched[t]
                if counts[c] > best_count:
                    best_count = counts[c]
                    best = c
                counts[c] = 0
            if best >= 0 and deg >= beta and (<double>best_count) / (<double>deg) >= alpha:
                labels[v] = best
                out[n_out] = v
                n_out += 1
                changed = True
    return np.asarray(out[:n_out]).copy()


def spans(const i64[::1] indptr, const i64[::1] indices, const i64[::1] coreness,
          i64 level, const i64[::1] labels, const i64[::1] sizes, verts):
    cdef const i64[::1] vv = np.ascontiguousarray(verts, dtype=np.int64)
    cdef Py_ssize_t k = vv.shape[0], nc = max(sizes.shape[0], 1)
    cdef i64[::1] counts = np.zeros(nc, dtype=np.int64)
    cdef i64[::1] touched = np.empty(nc, dtype=np.int64)
    span_arr = np.zeros(k, dtype=np.int64)
    arg_arr = np.full(k, -1, dtype=np.int64)
    cdef i64[::1] span = span_arr
    cdef i64[::1] arg = arg_arr
    cdef Py_ssize_t i, j, t, nt, v, u, c, cnt, best, best_count
    for i in range(k):
        v = vv[i]
        nt = 0
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if coreness[u] < level:
                continue
            c = labels[u]
            if c >= 0:
                if counts[c] == 0:
                    touched[nt] = c
                    nt += 1
                counts[c] += 1
        best = -1
        best_count = 0
        for t in range(nt):
            c = touched[t]
            cnt = counts[c]
            if cnt > best_count or (
                cnt == best_count and (sizes[c] < sizes[best] or (sizes[c] == sizes[best] and c < best))
            ):
                best_count = cnt
                best = c
            counts[c] = 0
        span[i] = best_count
        arg[i] = best
    return span_arr, arg_arr


def local_move(const i64[::1] indptr, const i64[::1] indices, const double[::1] weights,
               const double[::1] node_weight, i64[::1] community, double[::1] tot,
               order, double m2, Py_ssize_t max_passes):
    cdef const i64[::1] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = node_weight.shape[0]
    cdef double[::1] links = np.zeros(max(n, 1), dtype=np.float64)
    cdef cnp.uint8_t[::1] seen = np.zeros(max(n, 1), dtype=np.uint8)
    cdef i64[::1] touched = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t p, ii, i, j, u, c, d, best, nt, t, moved, moves = 0
    cdef double ki, gain, best_gain
    for p in range(max_passes):
        moved = 0
        for ii in range(ordv.shape[0]):
            i = ordv[ii]
            d = community[i]
            ki = node_weight[i]
            nt = 0
            for j in range(indptr[i], indptr[i + 1]):
                u = indices[j]
                if u == i:
                    continue
                c = community[u]
                if not seen[c]:
                    seen[c] = 1
                    touched[nt] = c
                    nt += 1
                links[c] += weights[j]
            tot[d] -= ki
            best = d
            best_gain = links[d] - tot[d] * ki / m2
            for t in range(nt):
                c = touched[t]
                gain = links[c] - tot[c] * ki / m2
                if gain > best_gain:
                    best_gain = gain
                    best = c
            for t in range(nt):
                c = touched[t]
                links[c] = 0.0
                seen[c] = 0
            links[d] = 0.0
            tot[best] += ki
            if best != d:
                community[i] = best
                moved += 1
        moves += moved
        if moved == 0:
            break
    return moves
