"""Density-scaled neighbourhood graph and its shortest-path metric.

The estimated intrinsic metric of a sampled space rescales Euclidean
edge lengths by the local sampling density: an edge between neighbours
x_i, x_j gets weight

    (alpha(N) * max(f_i, f_j))^(1/n) * |x_i - x_j|

over a symmetrised k-nearest-neighbour graph, and distances between all
pairs are shortest paths in that graph (infinite across components).
``alpha(N)`` is the consistency scaling N / (log N * (log N + (n-1) *
log log N)) with natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .density import DensityEstimate, unit_ball_volume

__all__ = [
    "ALPHA_FLOOR",
    "ScaledGraph",
    "alpha",
    "threshold_radius",
    "build_knn_graph",
    "estimated_distances",
    "component_counts",
    "select_k",
    "NoPlateauError",
]

# lower clamp for log N + (n-1) log log N, which can dip below zero at
# very small N when n > 1
ALPHA_FLOOR = 1e-3


class NoPlateauError(RuntimeError):
    """Raised when no stable component-count plateau exists below k_max."""


def alpha(n_points: int, dim: float) -> float:
    """Density-scaling factor alpha(N) for N points in intrinsic dimension n.

    alpha(1) = 1 by convention; otherwise
    N / (log N * max(log N + (n-1) log log N, ALPHA_FLOOR)).
    """
    if n_points < 1:
        raise ValueError("need at least one point")
    if dim < 1:
        raise ValueError("intrinsic dimension must be >= 1")
    if n_points == 1:
        return 1.0
    log_n = math.log(n_points)
    inner = log_n + (dim - 1.0) * math.log(log_n)
    return n_points / (log_n * max(inner, ALPHA_FLOOR))


def threshold_radius(n_points: int, dim: int) -> float:
    """Connectivity threshold radius r*_N = (alpha(N) L / (N v_n))^(1/n).

    Here L = log N + (n-1) log log N and v_n is the unit-ball volume.
    Requires N >= 3 so that log log N is positive.
    """
    if n_points < 3:
        raise ValueError("threshold radius needs N >= 3")
    if dim < 1:
        raise ValueError("intrinsic dimension must be >= 1")
    log_n = math.log(n_points)
    filling = log_n + (dim - 1.0) * math.log(log_n)
    return (alpha(n_points, dim) * filling / (n_points * unit_ball_volume(dim))) ** (1.0 / dim)


@dataclass(frozen=True)
class ScaledGraph:
    """Symmetric weighted graph on cloud indices.

    Edges are stored once with ``u < v``, sorted lexicographically.
    """

    n_vertices: int
    k: int
    edges_u: np.ndarray
    edges_v: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        if not (np.all(self.edges_u < self.edges_v) and np.all(self.weights > 0)):
            raise ValueError("edges must satisfy u < v with positive weights")

    @property
    def n_edges(self) -> int:
        return len(self.edges_u)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.edges_u.tolist(), self.edges_v.tolist()))

    def to_csr(self) -> csr_matrix:
        n = self.n_vertices
        u = np.concatenate((self.edges_u, self.edges_v))
        v = np.concatenate((self.edges_v, self.edges_u))
        w = np.concatenate((self.weights, self.weights))
        return csr_matrix((w, (u, v)), shape=(n, n))


def _pairwise(points: np.ndarray) -> np.ndarray:
    d = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", d, d))


def _neighbor_order(points: np.ndarray) -> np.ndarray:
    """Per-row neighbour indices sorted by (distance, index), self excluded."""
    d = _pairwise(points)
    if np.any(d[~np.eye(len(points), dtype=bool)] == 0.0):
        raise ValueError("degenerate input: cloud contains coincident points")
    np.fill_diagonal(d, np.inf)
    # stable argsort breaks distance ties toward the smaller index
    return np.argsort(d, axis=1, kind="stable")[:, :-1]


def build_knn_graph(
    cloud,
    k: int,
    density: DensityEstimate | np.ndarray | None = None,
    dim: float = 1.0,
    alpha_value: float | None = None,
) -> ScaledGraph:
    """Symmetrised k-NN graph with density-scaled edge weights.

    An edge {i, j} exists when j is among the k Euclidean nearest
    neighbours of i or vice versa; its weight is
    ``(alpha * max(f_i, f_j))^(1/n) * |x_i - x_j|``.  Oracle densities
    attached to the cloud take precedence over ``density``; values are
    floored at the smallest positive float.  ``alpha_value`` overrides
    alpha(N) (used to neutralise the scaling in controlled settings).

    With per-point intrinsic dimensions on the cloud, each edge uses
    n_ij = (n_i + n_j) / 2 in both the exponent and alpha.
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    n_points = len(points)
    if not 1 <= k < n_points:
        raise ValueError("k must satisfy 1 <= k < N")

    f = getattr(cloud, "oracle_density", None)
    if f is None:
        if density is None:
            raise ValueError("no density available: pass an estimate or attach oracle values")
        f = getattr(density, "values", density)
    f = np.maximum(np.asarray(f, dtype=float), np.finfo(float).tiny)
    if f.shape != (n_points,):
        raise ValueError("density must provide one value per point")

    order = _neighbor_order(points)
    nbr = order[:, :k]
    rows = np.repeat(np.arange(n_points), k)
    cols = nbr.ravel()
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    enc = np.unique(lo.astype(np.int64) * n_points + hi)
    u = (enc // n_points).astype(np.int64)
    v = (enc % n_points).astype(np.int64)

    dists = np.linalg.norm(points[u] - points[v], axis=1)
    fmax = np.maximum(f[u], f[v])
    per_dims = getattr(cloud, "intrinsic_dim", None)
    if per_dims is None:
        a = alpha(n_points, dim) if alpha_value is None else alpha_value
        w = (a * fmax) ** (1.0 / dim) * dists
    else:
        nd = np.asarray(per_dims, dtype=float)
        n_edge = 0.5 * (nd[u] + nd[v])
        if alpha_value is None:
            a = np.array([alpha(n_points, ne) for ne in n_edge])
        else:
            a = alpha_value
        w = (a * fmax) ** (1.0 / n_edge) * dists
    return ScaledGraph(n_vertices=n_points, k=k, edges_u=u, edges_v=v, weights=w)


def estimated_distances(graph: ScaledGraph) -> np.ndarray:
    """All-pairs shortest-path matrix of the scaled graph.

    Symmetric with zero diagonal; ``inf`` between components.
    """
    d = dijkstra(graph.to_csr(), directed=False)
    # path sums can differ by rounding between directions; symmetrise
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra
            self.count -= 1


def component_counts(cloud, k_max: int) -> np.ndarray:
    """Component count of the symmetrised k-NN graph for k = 1 .. k_max."""
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    n_points = len(points)
    if not 1 <= k_max < n_points:
        raise ValueError("k_max must satisfy 1 <= k_max < N")
    order = _neighbor_order(points)
    uf = _UnionFind(n_points)
    counts = np.empty(k_max, dtype=np.int64)
    for j in range(k_max):
        col = order[:, j]
        for i in range(n_points):
            uf.union(i, int(col[i]))
        counts[j] = uf.count
    return counts


def select_k(cloud, ell: int = 5, k_max: int | None = None) -> int:
    """Smallest k whose component count is constant over {k-ell, ..., k}.

    Scans k upward and returns the first k at which the count has not
    changed for ell consecutive increments; a cloud connected from k = 1
    therefore yields 1 + ell.  Raises ``NoPlateauError`` when no such k
    exists at or below ``k_max`` (default N - 1).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    n_points = len(getattr(cloud, "points", cloud))
    if k_max is None:
        k_max = n_points - 1
    counts = component_counts(cloud, k_max)
    for k in range(ell + 1, k_max + 1):
        window = counts[k - ell - 1 : k]
        if np.all(window == window[0]):
            return k
    raise NoPlateauError(f"no component plateau of length {ell + 1} within k <= {k_max}")
