"""Compiled kernels for clique enumeration and boundary reduction."""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "triangles_of_graph",
    "reduce_block",
    "merge_tree_pairs",
    "modp_rank",
    "apparent_cycle_triangles",
]


@njit(cache=True)
def triangles_of_graph(indptr, indices, entry):
    """Enumerate triangles of the graph with finite ``entry`` values.

    ``indptr``/``indices`` give forward adjacency (neighbours with larger
    index, ascending); ``entry`` is the dense symmetric edge-value matrix
    with ``inf`` marking absent edges.  Returns vertex triples
    (u < v < w) and the max edge value of each triangle.
    """
    n = len(indptr) - 1
    count = 0
    for u in range(n):
        s, e = indptr[u], indptr[u + 1]
        for a in range(s, e):
            va = indices[a]
            for b in range(a + 1, e):
                if np.isfinite(entry[va, indices[b]]):
                    count += 1
    verts = np.empty((count, 3), np.int32)
    vals = np.empty(count, np.float64)
    t = 0
    for u in range(n):
        s, e = indptr[u], indptr[u + 1]
        for a in range(s, e):
            va = indices[a]
            eua = entry[u, va]
            for b in range(a + 1, e):
                vb = indices[b]
                w = entry[va, vb]
                if np.isfinite(w):
                    verts[t, 0] = u
                    verts[t, 1] = va
                    verts[t, 2] = vb
                    m = eua
                    if entry[u, vb] > m:
                        m = entry[u, vb]
                    if w > m:
                        m = w
                    vals[t] = m
                    t += 1
    return verts, vals


@njit(cache=True)
def reduce_block(rows2d, coefs2d, n_rows, p, inv, skip):
    """Left-to-right column reduction of one fixed-width boundary block.

    Columns arrive in filtration order with entries sorted by row; the
    pivot of each column is its largest row.  Whenever a column's pivot
    is already owned, a multiple of the owning reduced column is
    subtracted (mod p) until the column claims a fresh pivot or empties.
    Returns ``pair_row[j]``: the pivot row claimed by column j, or -1
    when the column reduced to zero (or was skipped as known-zero).
    """
    n_cols, width = rows2d.shape
    pair_row = np.full(n_cols, -1, np.int64)
    owner = np.full(n_rows, -1, np.int64)
    col_start = np.zeros(n_cols, np.int64)
    col_len = np.zeros(n_cols, np.int64)
    arena_rows = np.empty(max(64, rows2d.size), np.int64)
    arena_coef = np.empty(max(64, rows2d.size), np.int64)
    arena_top = 0
    cur = np.empty(n_rows + 1, np.int64)
    curc = np.empty(n_rows + 1, np.int64)
    buf = np.empty(n_rows + 1, np.int64)
    bufc = np.empty(n_rows + 1, np.int64)
    for j in range(n_cols):
        if skip[j]:
            continue
        length = 0
        for t in range(width):
            c = coefs2d[j, t] % p
            if c != 0:
                cur[length] = rows2d[j, t]
                curc[length] = c
                length += 1
        while length > 0:
            low = cur[length - 1]
            own = owner[low]
            if own < 0:
                need = arena_top + length
                if need > arena_rows.size:
                    newcap = arena_rows.size
                    while newcap < need:
                        newcap *= 2
                    na = np.empty(newcap, np.int64)
                    nc = np.empty(newcap, np.int64)
                    na[:arena_top] = arena_rows[:arena_top]
                    nc[:arena_top] = arena_coef[:arena_top]
                    arena_rows = na
                    arena_coef = nc
                for t in range(length):
                    arena_rows[arena_top + t] = cur[t]
                    arena_coef[arena_top + t] = curc[t]
                col_start[j] = arena_top
                col_len[j] = length
                arena_top += length
                owner[low] = j
                pair_row[j] = low
                break
            ks = col_start[own]
            kl = col_len[own]
            factor = (curc[length - 1] * inv[arena_coef[ks + kl - 1]]) % p
            ia = 0
            ib = 0
            out = 0
            while ia < length and ib < kl:
                ra = cur[ia]
                rb = arena_rows[ks + ib]
                if ra < rb:
                    buf[out] = ra
                    bufc[out] = curc[ia]
                    out += 1
                    ia += 1
                elif rb < ra:
                    c = (-factor * arena_coef[ks + ib]) % p
                    if c != 0:
                        buf[out] = rb
                        bufc[out] = c
                        out += 1
                    ib += 1
                else:
                    c = (curc[ia] - factor * arena_coef[ks + ib]) % p
                    if c != 0:
                        buf[out] = ra
                        bufc[out] = c
                        out += 1
                    ia += 1
                    ib += 1
            while ia < length:
                buf[out] = cur[ia]
                bufc[out] = curc[ia]
                out += 1
                ia += 1
            while ib < kl:
                c = (-factor * arena_coef[ks + ib]) % p
                if c != 0:
                    buf[out] = arena_rows[ks + ib]
                    bufc[out] = c
                    out += 1
                ib += 1
            cur, buf = buf, cur
            curc, bufc = bufc, curc
            length = out
    return pair_row


@njit(cache=True)
def merge_tree_pairs(edge_a, edge_b, n_vertices):
    """Vertex-edge persistence pairs by the elder rule.

    Edges arrive in filtration order as pairs of vertex positions.  Each
    merging edge kills the younger (larger-position) of the two
    component roots; the returned array holds that position, or -1 for
    edges that close a cycle.  Equivalent to column reduction of the
    vertex-edge boundary block.
    """
    parent = np.arange(n_vertices)
    killed = np.full(len(edge_a), -1, np.int64)
    for j in range(len(edge_a)):
        a = edge_a[j]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = edge_b[j]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if a < b:
                parent[b] = a
                killed[j] = b
            else:
                parent[a] = b
                killed[j] = a
    return killed


@njit(cache=True, inline="always")
def _triple_less(a0, a1, a2, b0, b1, b2):
    if a0 != b0:
        return a0 < b0
    if a1 != b1:
        return a1 < b1
    return a2 < b2


@njit(cache=True)
def apparent_cycle_triangles(tri_verts, tri_vals, entry):
    """Mark triangles that are provably cycle (zero-reducing) columns.

    Triangle t is marked when its first tetrahedron cofacet tau in
    filtration order has the same entry value and t is the last facet of
    tau to enter.  Column tau then claims pivot t immediately during
    reduction of the one-higher block, so t's own column must reduce to
    zero; this holds whether or not that higher block is materialised,
    because blocks of different dimension reduce independently.

    ``entry`` is the dense symmetric edge-value matrix (inf = no edge);
    cofacet order follows (value, vertex tuple) with ties broken by the
    smaller added vertex, matching the canonical simplex order.
    """
    n = entry.shape[0]
    n_tri = len(tri_vals)
    skip = np.zeros(n_tri, np.bool_)
    for t in range(n_tri):
        a = tri_verts[t, 0]
        b = tri_verts[t, 1]
        c = tri_verts[t, 2]
        v = tri_vals[t]
        # first cofacet with equal value = smallest w whose three new
        # edges all exist with entry <= v
        w = -1
        for cand in range(n):
            if cand == a or cand == b or cand == c:
                continue
            if entry[cand, a] <= v and entry[cand, b] <= v and entry[cand, c] <= v:
                w = cand
                break
        if w < 0:
            continue
        # sorted tetra tuple
        if w < a:
            q0, q1, q2, q3 = w, a, b, c
        elif w < b:
            q0, q1, q2, q3 = a, w, b, c
        elif w < c:
            q0, q1, q2, q3 = a, b, w, c
        else:
            q0, q1, q2, q3 = a, b, c, w
        # t must be the facet of tau entering last: every other facet
        # must compare smaller by (value, tuple)
        ok = True
        for drop in range(4):
            if drop == 0:
                f0, f1, f2 = q1, q2, q3
            elif drop == 1:
                f0, f1, f2 = q0, q2, q3
            elif drop == 2:
                f0, f1, f2 = q0, q1, q3
            else:
                f0, f1, f2 = q0, q1, q2
            if f0 == a and f1 == b and f2 == c:
                continue
            vf = entry[f0, f1]
            if entry[f0, f2] > vf:
                vf = entry[f0, f2]
            if entry[f1, f2] > vf:
                vf = entry[f1, f2]
            if vf > v or (vf == v and not _triple_less(f0, f1, f2, a, b, c)):
                ok = False
                break
        if ok:
            skip[t] = True
    return skip


@njit(cache=True)
def modp_rank(mat, p):
    """Rank of an integer matrix over Z/pZ by Gaussian elimination."""
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return 0
    m = np.empty((rows, cols), np.int64)
    for r in range(rows):
        for c in range(cols):
            m[r, c] = mat[r, c] % p
    inv = np.zeros(p, np.int64)
    for a in range(1, p):
        r = 1
        b = a
        e = p - 2
        while e:
            if e & 1:
                r = (r * b) % p
            b = (b * b) % p
            e >>= 1
        inv[a] = r
    rank = 0
    pr = 0
    for c in range(cols):
        piv = -1
        for r in range(pr, rows):
            if m[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != pr:
            for cc in range(c, cols):
                tmp = m[pr, cc]
                m[pr, cc] = m[piv, cc]
                m[piv, cc] = tmp
        f0 = inv[m[pr, c]]
        for r in range(pr + 1, rows):
            v = m[r, c]
            if v != 0:
                f = (v * f0) % p
                for cc in range(c, cols):
                    m[r, cc] = (m[r, cc] - f * m[pr, cc]) % p
        rank += 1
        pr += 1
        if pr == rows:
            break
    return rank
