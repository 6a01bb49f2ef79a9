"""Filtered simplicial complexes over point clouds.

All families except the Cech construction are flag filtrations: an
edge-entry function determines when each pair enters, and a higher
simplex enters at the maximum entry of its edges.  Complexes are built
one dimension past ``max_dim`` so that deaths of ``max_dim``-dimensional
classes are visible, and simplices with entry value beyond a cap are
omitted (default cap: 1.05 times the largest finite edge entry).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._fast import triangles_of_graph
from .density import Kernel, estimate_density_all
from .scaled_metric import (
    _neighbor_order,
    _pairwise,
    alpha,
    build_knn_graph,
    estimated_distances,
    select_k,
)

__all__ = [
    "FilteredComplex",
    "FiltrationSpec",
    "vr_filtration",
    "dvr_filtration",
    "weighted_vr_filtration",
    "knn_filtration",
    "cech_filtration_euclidean",
    "validate_filtration",
    "build_filtration",
]


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices grouped by dimension in filtration order.

    ``verts[d]`` is an ``(n_d, d+1)`` int32 array of vertex tuples in
    strictly ascending order within each row; ``values[d]`` holds the
    matching entry values.  Rows of each dimension are sorted by
    (entry value, vertex tuple).  ``max_dim`` is the top homology
    dimension of interest; simplices extend one dimension higher.
    """

    n_vertices: int
    verts: dict[int, np.ndarray]
    values: dict[int, np.ndarray]
    max_dim: int

    @property
    def top_dim(self) -> int:
        return max(self.verts.keys())

    @property
    def n_simplices(self) -> int:
        return sum(len(v) for v in self.values.values())

    def counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.values.items()}

    def simplices(self):
        """Yield (vertex tuple, entry value), dimensions ascending."""
        for d in sorted(self.verts):
            vv, val = self.verts[d], self.values[d]
            for i in range(len(val)):
                yield tuple(int(x) for x in vv[i]), float(val[i])


def _canonical_sort(verts: np.ndarray, vals: np.ndarray):
    keys = [verts[:, c] for c in range(verts.shape[1] - 1, -1, -1)]
    order = np.lexsort(tuple(keys) + (vals,))
    return np.ascontiguousarray(verts[order]), vals[order]


def _extend_cliques(prev_verts, prev_vals, adj, entry):
    """Grow d-cliques to (d+1)-cliques by appending a larger vertex."""
    n = adj.shape[0]
    cols = np.arange(n)
    out_v, out_val = [], []
    chunk = max(1, 4_000_000 // n)
    for s in range(0, len(prev_verts), chunk):
        block = prev_verts[s : s + chunk]
        vals = prev_vals[s : s + chunk]
        mask = adj[block[:, 0]].copy()
        for c in range(1, block.shape[1]):
            mask &= adj[block[:, c]]
        mask &= cols[None, :] > block[:, -1][:, None]
        rows_idx, new_w = np.nonzero(mask)
        if len(rows_idx) == 0:
            continue
        grown = np.concatenate(
            [block[rows_idx], new_w[:, None].astype(np.int32)], axis=1
        )
        new_edges = entry[grown[:, :-1], new_w[:, None]]
        out_v.append(grown)
        out_val.append(np.maximum(vals[rows_idx], new_edges.max(axis=1)))
    if not out_v:
        empty = np.empty((0, prev_verts.shape[1] + 1), np.int32)
        return empty, np.empty(0)
    return np.vstack(out_v), np.concatenate(out_val)


def _flag_filtration(entry, max_dim: int, cap: float | None, vertex_value: float) -> FilteredComplex:
    """Flag filtration of a symmetric edge-entry matrix (inf = no edge)."""
    entry = np.asarray(entry, dtype=float)
    n = entry.shape[0]
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    iu, iv = np.triu_indices(n, k=1)
    finite = np.isfinite(entry[iu, iv])
    if cap is None:
        cap = 1.05 * float(entry[iu, iv][finite].max()) if finite.any() else 0.0
    work = entry.copy()
    work[work > cap] = np.inf
    np.fill_diagonal(work, np.inf)

    verts = {0: np.arange(n, dtype=np.int32)[:, None]}
    values = {0: np.full(n, float(vertex_value))}

    upper = np.zeros((n, n), dtype=bool)
    upper[iu, iv] = np.isfinite(work[iu, iv])
    eu, ev = np.nonzero(upper)
    if len(eu):
        evals = work[eu, ev]
        edge_verts = np.column_stack((eu, ev)).astype(np.int32)
        edge_verts, evals = _canonical_sort(edge_verts, evals)
        verts[1] = edge_verts
        values[1] = evals

    top = min(max_dim + 1, n - 1)
    if top >= 2 and len(eu):
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(upper.sum(axis=1))
        tri_verts, tri_vals = triangles_of_graph(indptr, ev.astype(np.int32), work)
        if len(tri_vals):
            tri_verts, tri_vals = _canonical_sort(tri_verts, tri_vals)
            verts[2] = tri_verts
            values[2] = tri_vals
            adj = upper | upper.T
            prev_v, prev_val = tri_verts, tri_vals
            for d in range(3, top + 1):
                prev_v, prev_val = _extend_cliques(prev_v, prev_val, adj, work)
                if not len(prev_val):
                    break
                prev_v, prev_val = _canonical_sort(prev_v, prev_val)
                verts[d] = prev_v
                values[d] = prev_val
    return FilteredComplex(n_vertices=n, verts=verts, values=values, max_dim=max_dim)


def vr_filtration(dist, max_dim: int = 1, cap: float | None = None) -> FilteredComplex:
    """Vietoris-Rips filtration of a distance matrix.

    A pair enters at half its distance (so the complex at parameter t
    uses pairs with d <= 2t), a simplex at its largest pair entry.
    Infinite distances never produce a simplex.

    Parameters
    ----------
    dist : (N, N) array
        Symmetric extended-real distance matrix with zero diagonal.
    max_dim : int
        Top homology dimension; simplices go one dimension higher.
    cap : float, optional
        Entry-value cutoff; defaults to 1.05x the largest finite entry.
    """
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if np.any(np.diagonal(d) != 0.0):
        raise ValueError("distance matrix must have zero diagonal")
    if np.any(np.isnan(d)) or np.any(d != d.T):
        raise ValueError("distance matrix must be symmetric and NaN-free")
    if np.any(d[np.isfinite(d)] < 0):
        raise ValueError("distances must be nonnegative")
    return _flag_filtration(d / 2.0, max_dim, cap, vertex_value=0.0)


def dvr_filtration(
    cloud,
    dim: float,
    k: int,
    kernel: Kernel | None = None,
    max_dim: int = 1,
    cap: float | None = None,
    alpha_value: float | None = None,
) -> FilteredComplex:
    """Vietoris-Rips filtration of the density-scaled graph metric.

    Estimates the density (unless the cloud carries oracle values),
    builds the weighted k-NN graph, takes shortest-path distances and
    applies :func:`vr_filtration` to the result.
    """
    if getattr(cloud, "oracle_density", None) is not None:
        est = None
    else:
        if kernel is None:
            kernel = Kernel("biweight", int(round(dim)))
        est = estimate_density_all(cloud, kernel)
    graph = build_knn_graph(cloud, k, density=est, dim=dim, alpha_value=alpha_value)
    return vr_filtration(estimated_distances(graph), max_dim, cap)


def weighted_vr_filtration(
    cloud,
    density,
    dim: float,
    max_dim: int = 1,
    cap: float | None = None,
    alpha_value: float | None = None,
) -> FilteredComplex:
    """Density-weighted Rips filtration on Euclidean distances.

    Each point grows a ball at rate ``s_x = (alpha(N) f(x))^(-1/n)``;
    the pair {x, y} enters when the balls meet, at
    ``t = |x - y| / (s_x + s_y)``.  Oracle densities on the cloud take
    precedence over ``density``.
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    n_points = len(points)
    f = getattr(cloud, "oracle_density", None)
    if f is None:
        if density is None:
            raise ValueError("no density available")
        f = getattr(density, "values", density)
    f = np.maximum(np.asarray(f, dtype=float), np.finfo(float).tiny)
    a = alpha(n_points, dim) if alpha_value is None else alpha_value
    slopes = (a * f) ** (-1.0 / dim)
    d = _pairwise(points)
    entry = d / (slopes[:, None] + slopes[None, :])
    np.fill_diagonal(entry, np.inf)
    return _flag_filtration(entry, max_dim, cap, vertex_value=0.0)


def knn_filtration(cloud, max_dim: int = 1, k_cap: int | None = None) -> FilteredComplex:
    """Nearest-neighbour-rank filtration (integer entry values).

    Vertices enter at 1; the pair {i, j} enters at the smallest k for
    which j is among the k nearest neighbours of i or vice versa, i.e.
    at ``min(rank_i(j), rank_j(i))``.  Distance ties resolve toward the
    smaller index.  ``k_cap`` limits the retained ranks (default N - 1,
    the complete graph).
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    n = len(points)
    if n < 1:
        raise ValueError("empty cloud")
    if k_cap is None:
        k_cap = n - 1
    if not 1 <= k_cap <= n - 1:
        raise ValueError("k_cap must satisfy 1 <= k_cap <= N - 1")
    order = _neighbor_order(points)
    ranks = np.empty((n, n), dtype=float)
    cols = np.arange(n - 1, dtype=float) + 1.0
    rows = np.repeat(np.arange(n), n - 1)
    ranks[rows, order.ravel()] = np.tile(cols, n)
    entry = np.minimum(ranks, ranks.T)
    np.fill_diagonal(entry, np.inf)
    return _flag_filtration(entry, max_dim, cap=float(k_cap), vertex_value=1.0)


def _circumsphere(pts: np.ndarray):
    """Smallest sphere through all of ``pts`` (center in their affine hull)."""
    p0 = pts[0]
    v = pts[1:] - p0
    if len(v) == 0:
        return p0, 0.0
    gram = 2.0 * v @ v.T
    rhs = np.einsum("ij,ij->i", v, v)
    try:
        lam = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        return None, np.inf
    center = p0 + lam @ v
    return center, float(np.linalg.norm(center - p0))


def _mini_ball_radius(pts: np.ndarray) -> float:
    """Exact minimum enclosing ball radius of a small point set.

    Enumerates candidate support subsets of size <= m + 1 and keeps the
    smallest sphere containing every point; exact for the tiny vertex
    sets this module feeds it.
    """
    m = pts.shape[1]
    best = np.inf
    for size in range(1, min(len(pts), m + 1) + 1):
        for sub in itertools.combinations(range(len(pts)), size):
            center, r = _circumsphere(pts[list(sub)])
            if center is None or r >= best:
                continue
            d = np.linalg.norm(pts - center, axis=1)
            if np.all(d <= r + 1e-9 * (1.0 + r)):
                best = r
    return best


def cech_filtration_euclidean(cloud, max_dim: int = 1, cap: float | None = None) -> FilteredComplex:
    """Cech filtration: each simplex enters at its minimum enclosing ball radius.

    Supported for ambient dimension m <= 3.  Entries of higher simplices
    are clamped up to the largest face entry so the filtration stays
    monotone under floating-point rounding.
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if points.shape[1] > 3:
        raise ValueError("Cech entries implemented for ambient dimension <= 3")
    d = _pairwise(points)
    np.fill_diagonal(d, np.inf)
    flag = _flag_filtration(d / 2.0, max_dim, cap, vertex_value=0.0)
    if cap is None:
        iu, iv = np.triu_indices(len(points), k=1)
        finite = np.isfinite(d[iu, iv])
        cap = 1.05 * float((d[iu, iv][finite] / 2.0).max()) if finite.any() else 0.0

    verts = {0: flag.verts[0]}
    values = {0: flag.values[0]}
    entry_of: dict[tuple, float] = {}
    if 1 in flag.verts:
        verts[1] = flag.verts[1]
        values[1] = flag.values[1]
        for row, val in zip(flag.verts[1], flag.values[1]):
            entry_of[(int(row[0]), int(row[1]))] = float(val)
    for dim in range(2, flag.top_dim + 1):
        keep_v, keep_val = [], []
        for row in flag.verts[dim]:
            tup = tuple(int(x) for x in row)
            r = _mini_ball_radius(points[list(tup)])
            for face in itertools.combinations(tup, dim):
                r = max(r, entry_of[face])
            if r <= cap:
                keep_v.append(row)
                keep_val.append(r)
                entry_of[tup] = r
        if not keep_v:
            break
        kv, kval = _canonical_sort(np.asarray(keep_v, np.int32), np.asarray(keep_val))
        verts[dim] = kv
        values[dim] = kval
    return FilteredComplex(
        n_vertices=len(points), verts=verts, values=values, max_dim=max_dim
    )


def _encode(verts: np.ndarray, n: int) -> np.ndarray:
    # base-n positional key; widths here keep n^(d+1) well inside int64
    if n ** verts.shape[1] >= 2**62:
        raise ValueError("complex too large to encode simplex keys")
    enc = verts[:, 0].astype(np.int64)
    for c in range(1, verts.shape[1]):
        enc = enc * n + verts[:, c]
    return enc


def validate_filtration(fc: FilteredComplex) -> bool:
    """Check canonical form, face closure and entry monotonicity.

    Returns False (rather than raising) when any simplex has unsorted or
    duplicate vertices, appears twice, is ordered inconsistently with
    (value, tuple), or has a missing or later-entering face.
    """
    try:
        n = fc.n_vertices
        if 0 not in fc.verts:
            return fc.n_simplices == 0
        if not np.array_equal(fc.verts[0][:, 0], np.arange(n)):
            return False
        enc_prev = None
        val_prev = None
        for d in sorted(fc.verts):
            vv, val = fc.verts[d], fc.values[d]
            if vv.shape != (len(val), d + 1):
                return False
            if len(val) == 0:
                return False
            if np.any(vv < 0) or np.any(vv >= n):
                return False
            if d > 0 and np.any(np.diff(vv, axis=1) <= 0):
                return False
            if not np.all(np.isfinite(val)):
                return False
            keys = [vv[:, c] for c in range(d, -1, -1)]
            order = np.lexsort(tuple(keys) + (val,))
            if not np.array_equal(order, np.arange(len(val))):
                return False
            enc = _encode(vv, n)
            if len(np.unique(enc)) != len(enc):
                return False
            if d >= 1:
                if d - 1 not in fc.verts:
                    return False
                sorter = np.argsort(enc_prev)
                sorted_prev = enc_prev[sorter]
                for drop in range(d + 1):
                    face = np.delete(vv, drop, axis=1)
                    fenc = _encode(face, n)
                    pos = np.searchsorted(sorted_prev, fenc)
                    if np.any(pos >= len(sorted_prev)) or np.any(
                        sorted_prev[np.minimum(pos, len(sorted_prev) - 1)] != fenc
                    ):
                        return False
                    if np.any(val_prev[sorter[pos]] > val):
                        return False
            enc_prev = enc
            val_prev = val
        return True
    except (ValueError, IndexError, TypeError):
        return False


@dataclass(frozen=True)
class FiltrationSpec:
    """Declarative description of a filtration run.

    ``family`` is one of vr, dvr, wvr, knn, cech.  ``cap`` doubles as
    the integer rank cap for the knn family.  ``k`` applies to dvr only
    and may be the string ``"auto"`` to trigger plateau selection with
    window ``ell``.
    """

    family: str
    max_dim: int = 1
    cap: float | None = None
    intrinsic_dim: float = 1.0
    k: int | str = "auto"
    ell: int = 5
    kernel_family: str = "biweight"

    def __post_init__(self) -> None:
        if self.family not in ("vr", "dvr", "wvr", "knn", "cech"):
            raise ValueError(f"unknown filtration family {self.family!r}")


def build_filtration(cloud, spec: FiltrationSpec):
    """Build the complex described by ``spec``; returns (complex, metadata).

    Metadata records derived quantities (selected k, alpha, kernel
    bandwidth) that a report of the run should carry.
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    meta: dict = {"family": spec.family, "n_points": len(points)}
    if spec.family == "vr":
        d = _pairwise(points)
        return vr_filtration(d, spec.max_dim, spec.cap), meta
    if spec.family == "cech":
        return cech_filtration_euclidean(cloud, spec.max_dim, spec.cap), meta
    if spec.family == "knn":
        k_cap = None if spec.cap is None else int(spec.cap)
        return knn_filtration(cloud, spec.max_dim, k_cap), meta
    n = spec.intrinsic_dim
    meta["alpha"] = alpha(len(points), n)
    kernel = Kernel(spec.kernel_family, int(round(n)))
    if getattr(cloud, "oracle_density", None) is not None:
        est = None
        meta["density"] = "oracle"
    else:
        est = estimate_density_all(cloud, kernel)
        meta["density"] = "kernel"
        meta["bandwidth"] = est.bandwidth
        meta["kernel"] = spec.kernel_family
    if spec.family == "wvr":
        f = est if est is not None else cloud.oracle_density
        return weighted_vr_filtration(cloud, f, n, spec.max_dim, spec.cap), meta
    k = spec.k
    if k == "auto":
        k = select_k(cloud, ell=spec.ell)
        meta["ell"] = spec.ell
    meta["k"] = int(k)
    graph = build_knn_graph(cloud, int(k), density=est, dim=n)
    meta["n_graph_edges"] = graph.n_edges
    dmat = estimated_distances(graph)
    return vr_filtration(dmat, spec.max_dim, spec.cap), meta
