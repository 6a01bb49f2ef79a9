"""Brute-force reference implementations used only by the test suite.

These recompute the matching distances from first principles: a linear
scan over candidate costs with a backtracking perfect-matching check,
nothing shared with the library's binary search.
"""

import itertools

import numpy as np


def _has_perfect_matching(adj):
    n = len(adj)
    owner = [-1] * n

    def place(i, seen):
        for j in range(n):
            if adj[i][j] and j not in seen:
                seen.add(j)
                if owner[j] < 0 or place(owner[j], seen):
                    owner[j] = i
                    return True
        return False

    return all(place(i, set()) for i in range(n))


def bottleneck_reference(a, b):
    """Bottleneck distance between finite (birth, death) sets.

    Pads each side with one diagonal slot per opposite point and
    returns the smallest candidate cost admitting a perfect matching.
    """
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    n, m = len(a), len(b)
    if n + m == 0:
        return 0.0
    cost = np.zeros((n + m, n + m))
    for i in range(n):
        for j in range(m):
            cost[i, j] = max(abs(a[i, 0] - b[j, 0]), abs(a[i, 1] - b[j, 1]))
        cost[i, m:] = (a[i, 1] - a[i, 0]) / 2.0
    for j in range(m):
        cost[n:, j] = (b[j, 1] - b[j, 0]) / 2.0
    for t in np.unique(cost):
        if _has_perfect_matching(cost <= t):
            return float(t)
    raise AssertionError("a full matching always exists at the top cost")


def minmax_matching_reference(x, y):
    """Min over all permutations of the max Euclidean displacement."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) == 0:
        return 0.0
    best = np.inf
    for perm in itertools.permutations(range(len(x))):
        worst = max(float(np.linalg.norm(x[i] - y[j])) for i, j in enumerate(perm))
        best = min(best, worst)
    return best
