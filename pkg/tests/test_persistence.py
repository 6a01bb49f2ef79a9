"""Filtration ordering, reduction and diagram extraction."""

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from scaledph import (
    FilteredComplex,
    betti_at,
    boundary_matrix,
    order_simplices,
    persistence_diagram,
    reduce,
    vr_filtration,
)

ROOT2 = np.sqrt(2.0)


def square_cloud():
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def random_fc(rng, n, max_dim=2):
    pts = rng.standard_normal((n, 2))
    return vr_filtration(cdist(pts, pts), max_dim=max_dim, cap=np.inf)


def diagram_set(dgm):
    return {
        (int(q), round(b, 12), None if np.isinf(v) else round(v, 12))
        for q, b, v in zip(dgm.dims, dgm.births, dgm.deaths)
    }


def test_square_complex_order():
    # 4 vertices, the 4 sides at 1/2, both diagonals at sqrt(2)/2, then
    # the 4 triangles and the solid tetrahedron at the same value with
    # lower dimension first.
    pts = square_cloud()
    fc = vr_filtration(cdist(pts, pts), max_dim=2)
    ordered = order_simplices(fc).to_list()
    dims = [len(s) - 1 for s, _ in ordered]
    vals = [v for _, v in ordered]
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3]
    assert vals[:4] == [0.0] * 4
    assert vals[4:8] == [0.5] * 4
    assert np.allclose(vals[8:], ROOT2 / 2)
    side = {(0, 1), (1, 2), (2, 3), (0, 3)}
    assert {s for s, _ in ordered[4:8]} == side
    assert {s for s, _ in ordered[8:10]} == {(0, 2), (1, 3)}
    assert ordered[-1][0] == (0, 1, 2, 3)


def test_global_positions_match_list():
    rng = np.random.default_rng(3)
    fc = random_fc(rng, 7)
    ordering = order_simplices(fc)
    listed = [s for s, _ in ordering.to_list()]
    for d in sorted(ordering.verts):
        for i, row in enumerate(ordering.verts[d]):
            assert listed[ordering.position(d, i)] == tuple(int(x) for x in row)


def test_order_rejects_invalid_filtration():
    # edge before one of its vertices
    fc = FilteredComplex(
        n_vertices=2,
        verts={0: np.array([[0], [1]], dtype=np.int32), 1: np.array([[0, 1]], dtype=np.int32)},
        values={0: np.array([0.0, 2.0]), 1: np.array([1.0])},
        max_dim=1,
    )
    with pytest.raises(ValueError):
        order_simplices(fc)
    order_simplices(fc, check=False)  # caller's risk


def test_two_point_pairing():
    d = np.array([[0.0, 1.8], [1.8, 0.0]])
    fc = vr_filtration(d)
    red = reduce(boundary_matrix(order_simplices(fc)), p=2)
    births, deaths = red.pairs(1)
    assert births.tolist() == [1]  # the later vertex dies
    assert deaths.tolist() == [0]
    assert red.essential(0).tolist() == [0]
    assert red.essential(1).tolist() == []


def test_pairs_and_essentials_partition_simplices():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        fc = random_fc(rng, int(rng.integers(4, 9)))
        ordering = order_simplices(fc)
        red = reduce(boundary_matrix(ordering), p=11)
        top = max(ordering.verts)
        paired = sum(len(red.pairs(d)[1]) for d in range(1, top + 1))
        essential = sum(len(red.essential(d)) for d in range(top + 1))
        assert 2 * paired + essential == ordering.n_simplices


def test_single_vertex_diagram():
    fc = vr_filtration(np.zeros((1, 1)))
    dgm = persistence_diagram(fc)
    assert diagram_set(dgm) == {(0, 0.0, None)}


def test_two_point_diagram():
    d = np.array([[0.0, 3.0], [3.0, 0.0]])
    dgm = persistence_diagram(vr_filtration(d))
    assert diagram_set(dgm) == {(0, 0.0, None), (0, 0.0, 1.5)}


def test_zero_length_pairs_dropped():
    # coincident pair: the vertex-edge pair at value 0 must not appear
    d = np.array([[0.0, 0.0, 2.0], [0.0, 0.0, 2.0], [2.0, 2.0, 0.0]])
    dgm = persistence_diagram(vr_filtration(d))
    assert diagram_set(dgm) == {(0, 0.0, None), (0, 0.0, 1.0)}


def test_unit_square_h1():
    pts = square_cloud()
    fc = vr_filtration(cdist(pts, pts), max_dim=1)
    b, v = persistence_diagram(fc).in_dim(1)
    assert len(b) == 1
    assert b[0] == 0.5
    assert abs(v[0] - 0.70711) < 1e-5
    assert abs(v[0] - ROOT2 / 2) < 1e-12


def test_square_h2_cancels():
    # the four triangles close a 2-sphere at the same value the solid
    # tetrahedron fills it, so no dimension-2 point survives
    pts = square_cloud()
    fc = vr_filtration(cdist(pts, pts), max_dim=2)
    dgm = persistence_diagram(fc)
    b, _ = dgm.in_dim(2)
    assert len(b) == 0
    b1, v1 = dgm.in_dim(1)
    assert b1.tolist() == [0.5] and abs(v1[0] - ROOT2 / 2) < 1e-12


def test_betti_four_cycle():
    pts = square_cloud()
    fc = vr_filtration(cdist(pts, pts), max_dim=1)
    assert betti_at(fc, 0.4, 0) == 4
    assert betti_at(fc, 0.4, 1) == 0
    assert betti_at(fc, 0.6, 0) == 1
    assert betti_at(fc, 0.6, 1) == 1


def test_betti_full_complex():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((5, 2))
    fc = vr_filtration(cdist(pts, pts), max_dim=2, cap=np.inf)
    r = float(np.max(cdist(pts, pts)))
    assert betti_at(fc, r, 0) == 1
    assert betti_at(fc, r, 1) == 0
    assert betti_at(fc, r, 2) == 0


def test_betti_disjoint_edges():
    fc = FilteredComplex(
        n_vertices=4,
        verts={
            0: np.array([[0], [1], [2], [3]], dtype=np.int32),
            1: np.array([[0, 1], [2, 3]], dtype=np.int32),
        },
        values={0: np.zeros(4), 1: np.array([0.3, 0.4])},
        max_dim=1,
    )
    assert betti_at(fc, 0.35, 0) == 3
    assert betti_at(fc, 0.5, 0) == 2
    assert betti_at(fc, 0.5, 1) == 0


def test_betti_rejects_large_subcomplex():
    rng = np.random.default_rng(1)
    pts = rng.standard_normal((70, 2))
    d = cdist(pts, pts)
    fc = vr_filtration(d, max_dim=1, cap=np.inf)
    with pytest.raises(ValueError):
        betti_at(fc, float(np.max(d)), 1)


def test_betti_rejects_bad_arguments():
    fc = vr_filtration(np.zeros((1, 1)))
    with pytest.raises(ValueError):
        betti_at(fc, 1.0, -1)
    with pytest.raises(ValueError):
        betti_at(fc, 1.0, 0, p=9)


def test_alive_counts_match_betti():
    """Diagram rank function against the direct Betti oracle."""
    for seed in range(8):
        rng = np.random.default_rng(seed)
        fc = random_fc(rng, int(rng.integers(5, 10)))
        dgm = persistence_diagram(fc)
        entries = np.unique(np.concatenate([v for v in fc.values.values()]))
        probes = list(entries) + list((entries[:-1] + entries[1:]) / 2)
        probes.append(float(entries[-1]) + 1.0)
        for r in probes:
            for q in range(3):
                assert dgm.alive_count(q, r) == betti_at(fc, r, q), (seed, r, q)


def test_euler_characteristic():
    for seed in range(6):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 7))
        pts = rng.standard_normal((n, 2))
        fc = vr_filtration(cdist(pts, pts), max_dim=n - 2, cap=np.inf)
        dgm = persistence_diagram(fc)
        entries = np.unique(np.concatenate([v for v in fc.values.values()]))
        for r in list(entries) + [float(entries[-1]) + 1.0]:
            chi = sum(
                (-1) ** d * int(np.count_nonzero(fc.values[d] <= r)) for d in fc.values
            )
            chi_h = sum((-1) ** q * dgm.alive_count(q, r) for q in range(n - 1))
            assert chi == chi_h, (seed, r)


def test_field_independence():
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((25, 2))
    fc = vr_filtration(cdist(pts, pts), max_dim=2)
    base = persistence_diagram(fc, p=2)
    for p in (3, 11):
        other = persistence_diagram(fc, p=p)
        assert np.array_equal(base.dims, other.dims)
        assert np.array_equal(base.births, other.births)
        assert np.array_equal(base.deaths, other.deaths)


def test_shortcut_changes_nothing():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((30, 2))
        fc = vr_filtration(cdist(pts, pts), max_dim=1)
        fast = persistence_diagram(fc, shortcut=True)
        slow = persistence_diagram(fc, shortcut=False)
        assert np.array_equal(fast.dims, slow.dims)
        assert np.array_equal(fast.births, slow.births)
        assert np.array_equal(fast.deaths, slow.deaths)


def test_deterministic_reruns():
    rng = np.random.default_rng(9)
    pts = rng.standard_normal((20, 2))
    fc = vr_filtration(cdist(pts, pts), max_dim=2)
    a = persistence_diagram(fc)
    b = persistence_diagram(fc)
    assert a.births.tobytes() == b.births.tobytes()
    assert a.deaths.tobytes() == b.deaths.tobytes()
    assert a.dims.tobytes() == b.dims.tobytes()


def test_composite_field_rejected():
    fc = vr_filtration(np.zeros((1, 1)))
    for p in (1, 4, 9, -7):
        with pytest.raises(ValueError):
            persistence_diagram(fc, p=p)


def test_diagram_sorted_and_positive():
    rng = np.random.default_rng(11)
    fc = random_fc(rng, 12)
    dgm = persistence_diagram(fc)
    assert np.all(dgm.deaths > dgm.births)
    key = np.lexsort((dgm.deaths, dgm.births, dgm.dims))
    assert np.array_equal(key, np.arange(len(dgm)))
    assert dgm.infinite_count(0) == 1  # connected at the cap
