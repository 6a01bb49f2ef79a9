"""Bottleneck-type distances between persistence diagrams.

The bottleneck distance allows matching diagram points to the diagonal;
its optimum is always realised at one of finitely many candidate costs
(a point-to-point sup-norm distance or a point's half-persistence), so
a binary search over the sorted candidate set with a perfect-matching
feasibility test at each step computes it exactly.  Points with
infinite death are matched separately among themselves by birth.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import PersistenceDiagram

__all__ = ["bottleneck", "wasserstein_inf_pointcloud"]


def _perfect_matching_exists(adj: np.ndarray) -> bool:
    """Whether the boolean biadjacency matrix admits a perfect matching."""
    n = adj.shape[0]
    if adj.shape[1] != n:
        return False
    if n == 0:
        return True
    if not (adj.any(axis=1).all() and adj.any(axis=0).all()):
        return False
    match = maximum_bipartite_matching(csr_matrix(adj), perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(a: np.ndarray, b: np.ndarray) -> float:
    """Bottleneck distance between finite point sets with diagonal slack.

    ``a`` and ``b`` are (n, 2) arrays of (birth, death) pairs, deaths
    finite.  Unmatched points pay their distance to the diagonal,
    (death - birth) / 2.
    """
    na, nb = len(a), len(b)
    if na == 0 and nb == 0:
        return 0.0
    diag_a = (a[:, 1] - a[:, 0]) / 2.0 if na else np.empty(0)
    diag_b = (b[:, 1] - b[:, 0]) / 2.0 if nb else np.empty(0)
    if na and nb:
        cross = np.max(
            np.abs(a[:, None, :] - b[None, :, :]), axis=2
        )
        candidates = np.concatenate((cross.ravel(), diag_a, diag_b, [0.0]))
    else:
        cross = np.empty((na, nb))
        candidates = np.concatenate((diag_a, diag_b, [0.0]))
    candidates = np.unique(candidates)

    size = na + nb

    def feasible(t: float) -> bool:
        adj = np.zeros((size, size), dtype=bool)
        if na and nb:
            adj[:na, :nb] = cross <= t
        # a_i to its own diagonal slot, diagonal slots to b_j
        adj[:na, nb:] = False
        for i in range(na):
            adj[i, nb + i] = diag_a[i] <= t
        for j in range(nb):
            adj[na + j, j] = diag_b[j] <= t
        adj[na:, nb:] = True
        return _perfect_matching_exists(adj)

    lo, hi = 0, len(candidates) - 1
    if not feasible(candidates[hi]):
        return float("inf")
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, dim: int, tol: float = 1e-9) -> float:
    """Bottleneck distance between the dimension-``dim`` parts of two diagrams.

    Finite points may match each other or the diagonal; infinite-death
    points must match each other (sorted by birth), and a mismatch in
    their counts makes the distance infinite.  The result is exact up to
    the floating-point arithmetic of the candidate costs; ``tol`` is
    accepted for interface compatibility and not otherwise used.
    """
    ab, ad = a.in_dim(dim)
    bb, bd = b.in_dim(dim)
    a_inf = np.sort(ab[np.isinf(ad)])
    b_inf = np.sort(bb[np.isinf(bd)])
    if len(a_inf) != len(b_inf):
        return float("inf")
    inf_part = float(np.max(np.abs(a_inf - b_inf))) if len(a_inf) else 0.0
    a_fin = np.column_stack((ab[np.isfinite(ad)], ad[np.isfinite(ad)]))
    b_fin = np.column_stack((bb[np.isfinite(bd)], bd[np.isfinite(bd)]))
    return max(inf_part, _finite_bottleneck(a_fin, b_fin))


def wasserstein_inf_pointcloud(x: np.ndarray, y: np.ndarray) -> float:
    """Min-max perfect matching distance between equal-size point sets.

    The smallest t such that the points of ``x`` can be matched
    one-to-one with the points of ``y`` moving each by at most t
    (Euclidean).  Rejects size mismatches.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError("point sets must have identical shape")
    n = len(x)
    if n == 0:
        return 0.0
    diff = x[:, None, :] - y[None, :, :]
    cost = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    candidates = np.unique(cost)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(cost <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])
