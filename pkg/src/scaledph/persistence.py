"""Persistent homology of filtered complexes over a prime field.

The boundary matrix is reduced by the standard left-to-right column
algorithm, organised per dimension: columns of dimension d only ever
combine with other dimension-d columns, so each block reduces
independently in filtration order.  Blocks are processed from the top
dimension downward so that pivots found in dimension d+1 clear the
corresponding known-cycle columns of dimension d before they are
touched, and the vertex-edge block uses the equivalent elder-rule merge
tree.  ``betti_at`` recomputes Betti numbers from scratch by dense rank
computations and is deliberately independent of the reduction path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._fast import apparent_cycle_triangles, merge_tree_pairs, modp_rank, reduce_block
from .filtrations import FilteredComplex, validate_filtration

__all__ = [
    "SimplexOrdering",
    "BoundaryMatrix",
    "Reduction",
    "PersistenceDiagram",
    "order_simplices",
    "boundary_matrix",
    "reduce",
    "extract_diagram",
    "persistence_diagram",
    "betti_at",
]


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"field characteristic must be prime, got {p}")


@dataclass(frozen=True)
class SimplexOrdering:
    """Filtration order: (entry value, dimension, vertex tuple) ascending.

    Simplices are kept in per-dimension arrays (each already sorted by
    value then tuple); the global order interleaves dimensions by value,
    with lower dimension first on ties, and is materialised only on
    demand.
    """

    n_vertices: int
    verts: dict[int, np.ndarray]
    values: dict[int, np.ndarray]
    max_dim: int
    vertex_position: np.ndarray

    def counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.values.items()}

    @property
    def n_simplices(self) -> int:
        return sum(len(v) for v in self.values.values())

    def position(self, dim: int, idx: int) -> int:
        """Global rank of the idx-th dimension-``dim`` simplex."""
        val = self.values[dim][idx]
        pos = int(idx)
        for d, vals in self.values.items():
            if d < dim:
                pos += int(np.searchsorted(vals, val, side="right"))
            elif d > dim:
                pos += int(np.searchsorted(vals, val, side="left"))
        return pos

    def to_list(self) -> list[tuple[tuple, float]]:
        """Full ordered simplex list; intended for small complexes."""
        items = []
        for d in sorted(self.verts):
            for i, row in enumerate(self.verts[d]):
                items.append((float(self.values[d][i]), d, tuple(int(x) for x in row)))
        items.sort()
        return [(tup, val) for val, _, tup in items]


def order_simplices(fc: FilteredComplex, check: bool = True) -> SimplexOrdering:
    """Wrap a filtered complex in its filtration order.

    With ``check`` (the default) the filtration is validated first and
    an invalid one is rejected.
    """
    if check and not validate_filtration(fc):
        raise ValueError("invalid filtration: not face-closed, monotone and canonical")
    vpos = np.empty(fc.n_vertices, dtype=np.int64)
    vpos[fc.verts[0][:, 0]] = np.arange(fc.n_vertices)
    return SimplexOrdering(
        n_vertices=fc.n_vertices,
        verts=fc.verts,
        values=fc.values,
        max_dim=fc.max_dim,
        vertex_position=vpos,
    )


@dataclass(frozen=True)
class BoundaryMatrix:
    """Per-dimension boundary blocks in filtration order.

    ``rows[d][j]`` lists the positions (within the dimension d-1 block)
    of the facets of the j-th d-simplex, sorted ascending per column;
    ``coefs[d][j]`` holds the matching alternating +-1 signs.
    """

    rows: dict[int, np.ndarray]
    coefs: dict[int, np.ndarray]
    n_cells: dict[int, int]


def boundary_matrix(ordering: SimplexOrdering) -> BoundaryMatrix:
    rows: dict[int, np.ndarray] = {}
    coefs: dict[int, np.ndarray] = {}
    n_cells = {d: len(v) for d, v in ordering.values.items()}
    n = ordering.n_vertices
    for d in sorted(ordering.verts):
        if d == 0:
            continue
        vv = ordering.verts[d]
        m = len(vv)
        face_pos = np.empty((m, d + 1), dtype=np.int64)
        if d == 1:
            face_pos[:, 0] = ordering.vertex_position[vv[:, 0]]
            face_pos[:, 1] = ordering.vertex_position[vv[:, 1]]
        else:
            prev = ordering.verts[d - 1]
            enc_prev = prev[:, 0].astype(np.int64)
            for c in range(1, d):
                enc_prev = enc_prev * n + prev[:, c]
            sorter = np.argsort(enc_prev)
            sorted_prev = enc_prev[sorter]
            for drop in range(d + 1):
                face = np.delete(vv, drop, axis=1)
                fenc = face[:, 0].astype(np.int64)
                for c in range(1, d):
                    fenc = fenc * n + face[:, c]
                face_pos[:, drop] = sorter[np.searchsorted(sorted_prev, fenc)]
        sign = np.empty((m, d + 1), dtype=np.int8)
        sign[:] = np.where(np.arange(d + 1) % 2 == 0, 1, -1)
        perm = np.argsort(face_pos, axis=1)
        rows[d] = np.ascontiguousarray(
            np.take_along_axis(face_pos, perm, axis=1).astype(np.int32)
        )
        coefs[d] = np.ascontiguousarray(np.take_along_axis(sign, perm, axis=1))
    return BoundaryMatrix(rows=rows, coefs=coefs, n_cells=n_cells)


@dataclass(frozen=True)
class Reduction:
    """Pairing produced by column reduction over Z/pZ.

    ``pair_row[d][j]`` is the dimension d-1 position killed by the j-th
    d-column, or -1 when that column is a cycle.
    """

    p: int
    n_cells: dict[int, int]
    pair_row: dict[int, np.ndarray]

    def pairs(self, d: int):
        """(birth positions in dim d-1, death positions in dim d)."""
        pr = self.pair_row.get(d)
        if pr is None:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        deaths = np.nonzero(pr >= 0)[0]
        return pr[deaths], deaths

    def positive_mask(self, d: int) -> np.ndarray:
        if d == 0:
            return np.ones(self.n_cells.get(0, 0), dtype=bool)
        pr = self.pair_row.get(d)
        if pr is None:
            return np.ones(self.n_cells.get(d, 0), dtype=bool)
        return pr < 0

    def essential(self, d: int) -> np.ndarray:
        """Positions of dimension-d cycles never killed from above."""
        mask = self.positive_mask(d).copy()
        above = self.pair_row.get(d + 1)
        if above is not None:
            mask[above[above >= 0]] = False
        return np.nonzero(mask)[0]


def reduce(
    bm: BoundaryMatrix,
    p: int = 11,
    preskip: dict[int, np.ndarray] | None = None,
) -> Reduction:
    """Reduce every boundary block; returns the persistence pairing.

    Processes dimensions from the top down so that each pivot row found
    in dimension d+1 marks a known-cycle column of dimension d, which is
    then skipped (cleared) instead of reduced.  The vertex-edge block is
    resolved by the elder-rule merge tree, which yields the same pairing
    as column reduction.  ``preskip`` may mark further columns that the
    caller has proven to be cycles (e.g. via their first cofacet); they
    are skipped the same way.
    """
    _check_prime(p)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    dims = sorted(bm.rows)
    pair_row: dict[int, np.ndarray] = {}
    skip: dict[int, np.ndarray] = {}
    for d in sorted(dims, reverse=True):
        if d == 1:
            continue
        sk = skip.get(d)
        if sk is None:
            sk = np.zeros(bm.n_cells[d], dtype=bool)
        if preskip is not None and d in preskip:
            sk = sk | preskip[d]
        pr = reduce_block(bm.rows[d], bm.coefs[d], bm.n_cells[d - 1], p, inv, sk)
        pair_row[d] = pr
        if d - 1 >= 2:
            mask = np.zeros(bm.n_cells[d - 1], dtype=bool)
            mask[pr[pr >= 0]] = True
            skip[d - 1] = mask
    if 1 in bm.rows:
        e = bm.rows[1]
        pair_row[1] = merge_tree_pairs(
            np.ascontiguousarray(e[:, 0]).astype(np.int64),
            np.ascontiguousarray(e[:, 1]).astype(np.int64),
            bm.n_cells[0],
        )
    return Reduction(p=p, n_cells=dict(bm.n_cells), pair_row=pair_row)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (dimension, birth, death) with death = inf allowed.

    Stored sorted by (dimension, birth, death); zero-length points are
    never present.
    """

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.dims, dtype=np.int64)
        b = np.asarray(self.births, dtype=float)
        v = np.asarray(self.deaths, dtype=float)
        if not (len(d) == len(b) == len(v)):
            raise ValueError("mismatched diagram arrays")
        order = np.lexsort((v, b, d))
        object.__setattr__(self, "dims", d[order])
        object.__setattr__(self, "births", b[order])
        object.__setattr__(self, "deaths", v[order])

    def __len__(self) -> int:
        return len(self.dims)

    def in_dim(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        sel = self.dims == q
        return self.births[sel], self.deaths[sel]

    def infinite_count(self, q: int) -> int:
        b, v = self.in_dim(q)
        return int(np.sum(np.isinf(v)))

    def finite_lifetimes(self, q: int) -> np.ndarray:
        """Finite bar lengths in dimension q, longest first."""
        b, v = self.in_dim(q)
        fin = np.isfinite(v)
        return np.sort(v[fin] - b[fin])[::-1]

    def alive_count(self, q: int, r: float) -> int:
        b, v = self.in_dim(q)
        return int(np.sum((b <= r) & (r < v)))


def extract_diagram(
    red: Reduction, ordering: SimplexOrdering, max_dim: int | None = None
) -> PersistenceDiagram:
    """Diagram points from a reduction; drops zero-length pairs.

    Dimensions 0 .. ``max_dim`` (default: the ordering's homology
    target) are reported; ``max_dim``-dimensional deaths come from the
    one-higher block when it was built.
    """
    if max_dim is None:
        max_dim = ordering.max_dim
    dims, births, deaths = [], [], []
    for q in range(max_dim + 1):
        if q not in ordering.values:
            continue
        vals_q = ordering.values[q]
        brows, dcols = red.pairs(q + 1)
        if len(dcols):
            b = vals_q[brows]
            v = ordering.values[q + 1][dcols]
            keep = v > b
            dims.append(np.full(int(keep.sum()), q))
            births.append(b[keep])
            deaths.append(v[keep])
        ess = red.essential(q)
        if len(ess):
            dims.append(np.full(len(ess), q))
            births.append(vals_q[ess])
            deaths.append(np.full(len(ess), np.inf))
    if not dims:
        return PersistenceDiagram(np.empty(0, np.int64), np.empty(0), np.empty(0))
    return PersistenceDiagram(
        np.concatenate(dims), np.concatenate(births), np.concatenate(deaths)
    )


def apparent_positive_mask(ordering: SimplexOrdering) -> np.ndarray | None:
    """Cycle-column mask for a top triangle block, None when inapplicable.

    Rebuilds the dense edge-entry matrix from the ordering and marks
    triangles whose first equal-value tetrahedron cofacet pairs with
    them; such columns reduce to zero and can be skipped.  Only valid
    when no dimension-3 block exists to clear them instead, and only
    when every triangle value equals the max of its edge entries: the
    cofacet argument runs in the flag complex of the edge matrix, whose
    triangle block must coincide with this one.  Enclosing-ball values
    break that rule on acute triangles, so those complexes opt out.
    """
    if 2 not in ordering.verts or max(ordering.verts) != 2:
        return None
    n = ordering.n_vertices
    entry = np.full((n, n), np.inf)
    ev = ordering.verts[1]
    entry[ev[:, 0], ev[:, 1]] = ordering.values[1]
    entry[ev[:, 1], ev[:, 0]] = ordering.values[1]
    tv = ordering.verts[2]
    flag_vals = np.maximum(
        np.maximum(entry[tv[:, 0], tv[:, 1]], entry[tv[:, 0], tv[:, 2]]),
        entry[tv[:, 1], tv[:, 2]],
    )
    if not np.array_equal(flag_vals, ordering.values[2]):
        return None
    return apparent_cycle_triangles(tv, ordering.values[2], entry)


def persistence_diagram(
    fc: FilteredComplex,
    p: int = 11,
    max_dim: int | None = None,
    check: bool = True,
    shortcut: bool = True,
) -> PersistenceDiagram:
    """Order, reduce and extract in one call.

    ``shortcut`` enables the first-cofacet cycle detection for a top
    triangle block; it changes running time only, never the diagram.
    """
    ordering = order_simplices(fc, check=check)
    preskip = None
    if shortcut:
        mask = apparent_positive_mask(ordering)
        if mask is not None:
            preskip = {2: mask}
    red = reduce(boundary_matrix(ordering), p, preskip=preskip)
    return extract_diagram(red, ordering, max_dim)


def betti_at(fc: FilteredComplex, r: float, dim: int, p: int = 11) -> int:
    """Betti number of the level-r subcomplex by dense rank computation.

    beta_d = #S_d - rank B_d - rank B_{d+1} over Z/pZ, with boundary
    matrices assembled directly from vertex tuples.  Intended as an
    independent oracle; rejects subcomplexes with more than 2000
    simplices.
    """
    if dim < 0:
        raise ValueError("homology dimension must be >= 0")
    _check_prime(p)
    chosen: dict[int, list[tuple]] = {}
    total = 0
    for d in sorted(fc.verts):
        sel = fc.values[d] <= r
        total += int(sel.sum())
        if d in (dim - 1, dim, dim + 1):
            chosen[d] = [tuple(int(x) for x in row) for row in fc.verts[d][sel]]
    if total > 2000:
        raise ValueError("subcomplex too large for the dense oracle (limit 2000)")
    n_d = len(chosen.get(dim, []))
    if n_d == 0:
        return 0

    def rank_boundary(d: int) -> int:
        cells = chosen.get(d, [])
        faces = chosen.get(d - 1, [])
        if not cells or not faces or d == 0:
            return 0
        index = {f: i for i, f in enumerate(faces)}
        mat = np.zeros((len(faces), len(cells)), dtype=np.int64)
        for j, cell in enumerate(cells):
            for t in range(d + 1):
                face = cell[:t] + cell[t + 1 :]
                mat[index[face], j] = 1 if t % 2 == 0 else -1
        return int(modp_rank(mat, p))

    return n_d - rank_boundary(dim) - rank_boundary(dim + 1)
