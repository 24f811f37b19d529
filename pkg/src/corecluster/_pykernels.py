"""Pure-Python kernels. Reference semantics for ``_ckernels.pyx``.

Every function here has a compiled twin with the same signature and the
same floating-point evaluation order, so both backends return identical
results.
"""

import numpy as np


def core_numbers(indptr, indices):
    """Bucket-queue peeling; returns the coreness of every vertex."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    adj = indices.tolist()
    deg = [ptr[v + 1] - ptr[v] for v in range(n)]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    md = max(deg)
    bins = [0] * (md + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    pos = [0] * n
    vert = [0] * n
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
        for j in range(ptr[v], ptr[v + 1]):
            u = adj[j]
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
    return np.asarray(deg, dtype=np.int64)


def absorb(indptr, indices, coreness, level, labels, n_clusters, pending, alpha, beta):
    """Fixpoint of the neighbour-majority rule over ``pending``.

    Scans ``pending`` in the given order, repeating until a full scan makes no
    assignment. A vertex joins cluster ``c`` when at least ``alpha`` of its
    neighbours inside the ``level``-core are in ``c`` and it has at least
    ``beta`` such neighbours. ``labels`` is updated in place; returns the
    absorbed vertices in absorption order.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    core = coreness.tolist()
    lab = labels.tolist()
    todo = [int(v) for v in pending]
    counts = [0] * max(n_clusters, 1)
    out = []
    changed = True
    while changed:
        changed = False
        for v in todo:
            if lab[v] >= 0:
                continue
            deg = 0
            touched = []
            for j in range(ptr[v], ptr[v + 1]):
                u = adj[j]
                if core[u] < level:
                    continue
                deg += 1
                c = lab[u]
                if c >= 0:
                    if counts[c] == 0:
                        touched.append(c)
                    counts[c] += 1
            best = -1
            best_count = 0
            for c in touched:
                if counts[c] > best_count:
                    best_count = counts[c]
                    best = c
                counts[c] = 0
            if best >= 0 and deg >= beta and best_count / deg >= alpha:
                lab[v] = best
                labels[v] = best
                out.append(v)
                changed = True
    return np.asarray(out, dtype=np.int64)


def spans(indptr, indices, coreness, level, labels, sizes, verts):
    """Max neighbour overlap with any cluster and the smallest cluster achieving it.

    Ties on size go to the lowest cluster index; ``argspan`` is -1 when the
    overlap is zero.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    core = coreness.tolist()
    lab = labels.tolist()
    size = sizes.tolist()
    counts = [0] * max(len(size), 1)
    k = len(verts)
    span = np.zeros(k, dtype=np.int64)
    arg = np.full(k, -1, dtype=np.int64)
    for i in range(k):
        v = int(verts[i])
        touched = []
        for j in range(ptr[v], ptr[v + 1]):
            u = adj[j]
            if core[u] < level:
                continue
            c = lab[u]
            if c >= 0:
                if counts[c] == 0:
                    touched.append(c)
                counts[c] += 1
        best = -1
        best_count = 0
        for c in touched:
            cnt = counts[c]
            if cnt > best_count or (
                cnt == best_count and (size[c] < size[best] or (size[c] == size[best] and c < best))
            ):
                best_count = cnt
                best = c
            counts[c] = 0
        span[i] = best_count
        arg[i] = best
    return span, arg


def local_move(indptr, indices, weights, node_weight, community, tot, order, m2, max_passes):
    """Louvain local-moving phase on a weighted graph.

    ``node_weight[i]`` is the weighted degree of ``i`` (self-loops counted
    twice); self-loop entries in the adjacency are skipped when counting
    links to communities. ``community`` and ``tot`` are updated in place.
    Returns the number of moves made.
    """
    ptr = indptr.tolist()
    adj = indices.tolist()
    w = weights.tolist()
    kw = node_weight.tolist()
    comm = community.tolist()
    tt = tot.tolist()
    n = len(kw)
    links = [0.0] * n
    seen = [False] * n
    moves = 0
    for _ in range(max_passes):
        moved = 0
        for i in order.tolist():
            d = comm[i]
            ki = kw[i]
            touched = []
            for j in range(ptr[i], ptr[i + 1]):
                u = adj[j]
                if u == i:
                    continue
                c = comm[u]
                if not seen[c]:
                    seen[c] = True
                    touched.append(c)
                links[c] += w[j]
            tt[d] -= ki
            best = d
            best_gain = links[d] - tt[d] * ki / m2
            for c in touched:
                gain = links[c] - tt[c] * ki / m2
                if gain > best_gain:
                    best_gain = gain
                    best = c
            for c in touched:
                links[c] = 0.0
                seen[c] = False
            links[d] = 0.0
            tt[best] += ki
            if best != d:
                comm[i] = best
                moved += 1
        moves += moved
        if moved == 0:
            break
    community[:] = comm
    tot[:] = tt
    return moves
