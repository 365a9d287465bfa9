"""Hot loops over CSR adjacency arrays.

Every function here takes plain numpy arrays so it can be compiled with
numba. When numba is missing or disabled (KMP_NO_NUMBA=1) the same code
runs as ordinary Python, just slower. Nothing in this module knows about
the Network class; callers pass (indptr, indices) plus whatever scratch
arrays the kernel needs.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA = False
if not os.environ.get("KMP_NO_NUMBA"):
    try:
        from numba import njit as _njit

        NUMBA = True
    except ImportError:
        pass

if NUMBA:

    def _kernel(func):
        return _njit(cache=True, nogil=True)(func)

else:

    def _kernel(func):
        return func


@_kernel
def subset_degrees(indptr, indices, in_sub, sub):
    """Degree of each node of `sub` counting only neighbors inside `sub`.

    `in_sub` is a uint8 membership mask over all nodes; `sub` is the
    sorted member list. Returns an int64 array aligned with `sub`.
    """
    out = np.zeros(len(sub), np.int64)
    for i in range(len(sub)):
        v = sub[i]
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if in_sub[indices[e]]:
                c += 1
        out[i] = c
    return out


@_kernel
def count_neighbors_in(indptr, indices, mask, nodes):
    """For each node in `nodes`, count neighbors with mask set."""
    out = np.zeros(len(nodes), np.int64)
    for i in range(len(nodes)):
        v = nodes[i]
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if mask[indices[e]]:
                c += 1
        out[i] = c
    return out


@_kernel
def induced_edges(indptr, indices, in_sub, sub):
    """Number of edges with both endpoints in `sub`."""
    twice = 0
    for i in range(len(sub)):
        v = sub[i]
        for e in range(indptr[v], indptr[v + 1]):
            if in_sub[indices[e]]:
                twice += 1
    return twice // 2


@_kernel
def peel(indptr, indices, sub, n):
    """Core number of every node of `sub` within the induced subgraph.

    Bucket peeling in O(V + E): repeatedly remove a minimum-degree node
    and record the degree it had at removal time. Returns int64 labels
    aligned with `sub`.
    """
    nsub = len(sub)
    loc = np.full(n, -1, np.int64)
    for i in range(nsub):
        loc[sub[i]] = i
    deg = np.zeros(nsub, np.int64)
    maxdeg = 0
    for i in range(nsub):
        v = sub[i]
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if loc[indices[e]] >= 0:
                c += 1
        deg[i] = c
        if c > maxdeg:
            maxdeg = c
    # bucket sort members by degree
    bin_start = np.zeros(maxdeg + 2, np.int64)
    for i in range(nsub):
        bin_start[deg[i] + 1] += 1
    for d in range(1, maxdeg + 2):
        bin_start[d] += bin_start[d - 1]
    fill = bin_start[: maxdeg + 1].copy()
    pos = np.empty(nsub, np.int64)
    vert = np.empty(nsub, np.int64)
    for i in range(nsub):
        pos[i] = fill[deg[i]]
        vert[pos[i]] = i
        fill[deg[i]] += 1
    labels = np.zeros(nsub, np.int64)
    for idx in range(nsub):
        i = vert[idx]
        labels[i] = deg[i]
        v = sub[i]
        for e in range(indptr[v], indptr[v + 1]):
            j = loc[indices[e]]
            if j >= 0 and deg[j] > deg[i]:
                dj = deg[j]
                pj = pos[j]
                pw = bin_start[dj]
                w = vert[pw]
                if j != w:
                    vert[pj] = w
                    vert[pw] = j
                    pos[j] = pw
                    pos[w] = pj
                bin_start[dj] += 1
                deg[j] -= 1
    return labels


@_kernel
def component_labels(indptr, indices, sub, n):
    """Connected component id for each node of `sub` (induced subgraph).

    Ids are dense from 0 and ordered by each component's smallest member,
    provided `sub` is sorted ascending.
    """
    nsub = len(sub)
    loc = np.full(n, -1, np.int64)
    for i in range(nsub):
        loc[sub[i]] = i
    comp = np.full(nsub, -1, np.int64)
    queue = np.empty(nsub, np.int64)
    c = 0
    for i in range(nsub):
        if comp[i] >= 0:
            continue
        comp[i] = c
        queue[0] = i
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            v = sub[u]
            for e in range(indptr[v], indptr[v + 1]):
                j = loc[indices[e]]
                if j >= 0 and comp[j] < 0:
                    comp[j] = c
                    queue[tail] = j
                    tail += 1
        c += 1
    return comp


@_kernel
def extract_local_csr(indptr, indices, sub, n):
    """CSR of the subgraph induced by `sub`, with local 0..len(sub)-1 ids."""
    nsub = len(sub)
    loc = np.full(n, -1, np.int64)
    for i in range(nsub):
        loc[sub[i]] = i
    lptr = np.zeros(nsub + 1, np.int64)
    for i in range(nsub):
        v = sub[i]
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if loc[indices[e]] >= 0:
                c += 1
        lptr[i + 1] = lptr[i] + c
    lind = np.empty(lptr[nsub], np.int64)
    for i in range(nsub):
        v = sub[i]
        w = lptr[i]
        for e in range(indptr[v], indptr[v + 1]):
            j = loc[indices[e]]
            if j >= 0:
                lind[w] = j
                w += 1
    return lptr, lind


@_kernel
def matvec(lptr, lind, x, out):
    """out[i] = sum of x over neighbors of i in a local CSR."""
    for i in range(len(out)):
        s = 0.0
        for e in range(lptr[i], lptr[i + 1]):
            s += x[lind[e]]
        out[i] = s


@_kernel
def cut_counts(indptr, indices, side, nodes):
    """Edge counts for a 2-way split of one cluster.

    `side` is int8 over all nodes: 0 or 1 inside the cluster, -1 outside.
    Returns (cut, internal_0, internal_1).
    """
    cut2 = 0
    int0 = 0
    int1 = 0
    for i in range(len(nodes)):
        v = nodes[i]
        sv = side[v]
        for e in range(indptr[v], indptr[v + 1]):
            su = side[indices[e]]
            if su < 0:
                continue
            if su == sv:
                if sv == 0:
                    int0 += 1
                else:
                    int1 += 1
            else:
                cut2 += 1
    return cut2 // 2, int0 // 2, int1 // 2


@_kernel
def sweep_objective(lptr, lind, order, m_local):
    """Normalized cut of every prefix split along `order`.

    Nodes are added one at a time to side 0; after each addition the
    objective for the split (first t nodes | rest) is recorded. Entry t-1
    of the result corresponds to prefix length t, for t in 1..n-1.
    """
    nloc = len(order)
    placed = np.zeros(nloc, np.uint8)
    vals = np.empty(nloc - 1, np.float64)
    cut = 0
    i0 = 0
    for t in range(nloc - 1):
        v = order[t]
        a = 0
        for e in range(lptr[v], lptr[v + 1]):
            if placed[lind[e]]:
                a += 1
        deg = lptr[v + 1] - lptr[v]
        placed[v] = 1
        i0 += a
        cut += deg - 2 * a
        i1 = m_local - i0 - cut
        l0 = i0 + cut
        l1 = i1 + cut
        if l0 == 0 or l1 == 0:
            vals[t] = np.inf
        else:
            vals[t] = cut / l0 + cut / l1
    return vals


@_kernel
def refine_split(lptr, lind, side, cut, i0, i1, n0, n1, max_sweeps, max_moves):
    """Greedy single-node descent on the normalized-cut objective.

    `side` holds 0/1 per local node and is updated in place. A move is
    applied only if it strictly lowers the objective and leaves both
    sides nonempty. Runs at most `max_sweeps` passes over the nodes and
    at most `max_moves` accepted moves in total.
    """
    nloc = len(side)
    moves = 0
    for _ in range(max_sweeps):
        moved = False
        for v in range(nloc):
            sv = side[v]
            if sv == 0:
                if n0 <= 1:
                    continue
            else:
                if n1 <= 1:
                    continue
            a = 0
            b = 0
            for e in range(lptr[v], lptr[v + 1]):
                if side[lind[e]] == 0:
                    a += 1
                else:
                    b += 1
            if sv == 0:
                ncut = cut - b + a
                ni0 = i0 - a
                ni1 = i1 + b
            else:
                ncut = cut - a + b
                ni0 = i0 + a
                ni1 = i1 - b
            l0 = i0 + cut
            l1 = i1 + cut
            if l0 == 0 or l1 == 0:
                old = np.inf
            else:
                old = cut / l0 + cut / l1
            nl0 = ni0 + ncut
            nl1 = ni1 + ncut
            if nl0 == 0 or nl1 == 0:
                new = np.inf
            else:
                new = ncut / nl0 + ncut / nl1
            if new < old:
                side[v] = 1 - sv
                cut = ncut
                i0 = ni0
                i1 = ni1
                if sv == 0:
                    n0 -= 1
                    n1 += 1
                else:
                    n0 += 1
                    n1 -= 1
                moved = True
                moves += 1
                if moves >= max_moves:
                    return cut, i0, i1
        if not moved:
            break
    return cut, i0, i1


@_kernel
def best_cluster_per_node(indptr, indices, owner, core_size, min_id, cand, p):
    """Pick the attachment target for each candidate node.

    `owner[u]` is the cluster index of u if u is a core node, else -1.
    A candidate qualifies for cluster c when it has >= p neighbors in
    c's core; among qualifying clusters the one with the largest
    count/core_size ratio wins, ties broken by smaller `min_id`. Ratio
    comparisons use integer cross-products, so there is no float
    tie ambiguity. Returns the chosen cluster index per candidate
    (-1 when none qualifies).
    """
    ncl = len(core_size)
    count = np.zeros(ncl, np.int64)
    seen = np.full(ncl, -1, np.int64)
    done = np.full(ncl, -1, np.int64)
    out = np.full(len(cand), -1, np.int64)
    for ci in range(len(cand)):
        x = cand[ci]
        for e in range(indptr[x], indptr[x + 1]):
            c = owner[indices[e]]
            if c < 0:
                continue
            if seen[c] != ci:
                seen[c] = ci
                count[c] = 0
            count[c] += 1
        best = -1
        bnum = 0
        bden = 1
        for e in range(indptr[x], indptr[x + 1]):
            c = owner[indices[e]]
            if c < 0 or done[c] == ci:
                continue
            done[c] = ci
            cnt = count[c]
            if cnt < p:
                continue
            if best < 0:
                take = True
            else:
                lhs = cnt * bden
                rhs = bnum * core_size[c]
                take = lhs > rhs or (lhs == rhs and min_id[c] < min_id[best])
            if take:
                best = c
                bnum = cnt
                bden = core_size[c]
        out[ci] = best
    return out


@_kernel
def parse_int_pairs(buf, nmax):
    """Fast path for whitespace-separated pairs of nonnegative integers.

    Returns (u, v, count, ok). ok == 0 means the buffer contained
    something this parser does not handle (string ids, malformed rows,
    signs) and the caller must fall back to the general parser, which
    also produces the real error messages.
    """
    u = np.empty(nmax, np.int64)
    v = np.empty(nmax, np.int64)
    cnt = 0
    i = 0
    n = len(buf)
    while i < n:
        c = buf[i]
        if c == 35:  # '#' comment line
            while i < n and buf[i] != 10:
                i += 1
            i += 1
            continue
        if c == 10 or c == 13:  # blank line or stray CR
            i += 1
            continue
        # first field
        if c < 48 or c > 57:
            return u, v, cnt, 0
        a = 0
        nd = 0
        while i < n and 48 <= buf[i] <= 57:
            a = a * 10 + (buf[i] - 48)
            i += 1
            nd += 1
            if nd > 18:
                return u, v, cnt, 0
        if i >= n or (buf[i] != 9 and buf[i] != 32):
            return u, v, cnt, 0
        while i < n and (buf[i] == 9 or buf[i] == 32):
            i += 1
        # second field
        if i >= n or buf[i] < 48 or buf[i] > 57:
            return u, v, cnt, 0
        b = 0
        nd = 0
        while i < n and 48 <= buf[i] <= 57:
            b = b * 10 + (buf[i] - 48)
            i += 1
            nd += 1
            if nd > 18:
                return u, v, cnt, 0
        if i < n and buf[i] == 13:
            i += 1
        if i < n and buf[i] != 10:
            return u, v, cnt, 0
        i += 1
        u[cnt] = a
        v[cnt] = b
        cnt += 1
    return u, v, cnt, 1
