from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from syzmirror import _geometry as geo
from syzmirror._intmath import det, inverse
from syzmirror.exceptions import DimensionMismatch, MissingLiftingError, NonSimplicialCell
from syzmirror.laurent import newton_polytope, parse_laurent
from syzmirror.subdivision import (
    LatticePolytope,
    dual_tropical_curve,
    is_unimodular,
    regular_subdivision,
)

SEGMENT = LatticePolytope.from_points([(0,), (2,)])


def cell_sets(S):
    return sorted(sorted(c) for c in S.cells)


def brute_lower_hull_triangles(points, h):
    """Triangles whose lifted plane lies weakly below every lifted point."""
    out = []
    for tri in combinations(points, 3):
        A = [[Fraction(p[0]), Fraction(p[1]), Fraction(1)] for p in tri]
        if det(A) == 0:
            continue
        inv = inverse(A)
        rhs = [Fraction(h[p]) for p in tri]
        u, v, w = (sum(inv[i][j] * rhs[j] for j in range(3)) for i in range(3))
        if all(h[p] >= u * p[0] + v * p[1] + w for p in points):
            out.append(sorted(tri))
    return sorted(out)


def test_flat_simplex_single_cell(simplex_poly):
    S = regular_subdivision(newton_polytope(simplex_poly))
    assert cell_sets(S) == [[(0, 0), (0, 1), (1, 0)]]


def test_kp2_three_triangles(kp2_subdivision):
    cells = cell_sets(kp2_subdivision)
    assert len(cells) == 3 and all((0, 0) in c for c in cells)
    pts = kp2_subdivision.polytope.lattice_points
    assert cells == brute_lower_hull_triangles(pts, kp2_subdivision.lifting)


def test_segment_strictly_convex_lifting():
    S = regular_subdivision(SEGMENT, lambda a: a * a)
    assert cell_sets(S) == [[(0,), (1,)], [(1,), (2,)]]
    assert is_unimodular(S)


def test_unsubdivided_segment_not_unimodular():
    S = regular_subdivision(SEGMENT, {(0,): 0, (2,): 0})
    assert cell_sets(S) == [[(0,), (2,)]]
    assert not is_unimodular(S)


def test_missing_vertex_rejected():
    with pytest.raises(MissingLiftingError):
        regular_subdivision(SEGMENT, {(0,): 0, (1,): 0})


def test_tie_gives_polygonal_cell():
    P = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
    S = regular_subdivision(P)
    assert len(S.cells) == 1 and len(S.cells[0]) == 4
    with pytest.raises(NonSimplicialCell):
        is_unimodular(S)


def test_kp2_unimodular(kp2_subdivision):
    assert is_unimodular(kp2_subdivision)


def test_volumes_add_up(kp2_subdivision):
    S = kp2_subdivision
    assert sum(S.cell_normalized_volume(i) for i in range(len(S.cells))) == S.polytope.normalized_volume()


def test_simplex_curve(simplex_curve):
    assert list(simplex_curve.vertices.values()) == [(0, 0)]
    assert sorted(l.direction for l in simplex_curve.legs) == [(-1, 0), (0, -1), (1, 1)]
    assert simplex_curve.bounded_edges == []


def test_kp2_curve(kp2_curve):
    assert sorted(kp2_curve.vertices.values()) == [(-2, 1), (1, -2), (1, 1)]
    assert len(kp2_curve.bounded_edges) == 3
    # one leg per boundary edge of the triangle hull{(1,0),(0,1),(-1,-1)}
    assert len(kp2_curve.legs) == 3
    assert sorted(l.direction for l in kp2_curve.legs) == [(-2, 1), (1, -2), (1, 1)]


def test_curve_duality_and_orthogonality(kp2_curve):
    S = kp2_curve.subdivision
    assert len(kp2_curve.legs) == len(S.boundary_edges())
    assert sum(l.weight for l in kp2_curve.legs) == S.polytope.boundary_lattice_length()
    assert sorted(e.labels for e in kp2_curve.bounded_edges) == S.interior_edges()
    for e in kp2_curve.bounded_edges + kp2_curve.legs:
        (p, q) = e.labels
        edge = (q[0] - p[0], q[1] - p[1])
        assert edge[0] * e.direction[0] + edge[1] * e.direction[1] == 0


def test_vertices_on_corner_locus(kp2_curve):
    T = kp2_curve.tropical_function
    for i, v in kp2_curve.vertices.items():
        dominant = set(T.dominant_terms(v))
        assert set(kp2_curve.subdivision.cells[i]) <= dominant
    for leg in kp2_curve.legs:
        point = tuple(b + 5 * d for b, d in zip(leg.base, leg.direction))
        assert T.on_corner_locus(point)


def test_dual_curve_needs_plane():
    with pytest.raises(DimensionMismatch):
        dual_tropical_curve(regular_subdivision(SEGMENT))


def test_json_shape(kp2_subdivision):
    data = kp2_subdivision.to_json()
    assert set(data) == {"points", "lifting", "cells"}
    assert data["lifting"]["(0,0)"] == "-1"


heights = st.lists(st.integers(-3, 3), min_size=6, max_size=6)
POLY6 = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2)])


@settings(max_examples=40, deadline=None)
@given(heights)
def test_random_lifting_covers_polytope(hs):
    pts = sorted(POLY6.lattice_points)
    h = dict(zip(pts, hs))
    S = regular_subdivision(POLY6, h)
    assert sum(S.cell_normalized_volume(i) for i in range(len(S.cells))) == POLY6.normalized_volume()
    rng = np.random.default_rng(abs(hash(tuple(hs))) % 2 ** 32)
    for _ in range(10):
        a, b = sorted(rng.integers(0, 60, 2))
        p = (Fraction(int(a), 30), Fraction(int(b - a), 30))
        if not POLY6.contains(p):
            continue
        hits = S.locate(p)
        assert hits
        if len(hits) == 2:
            c1, c2 = (S.cell_vertices(i) for i in hits)
            shared = [q for q in c1 if q in c2]
            assert len(shared) >= 2 and geo.on_segment(shared[0], shared[1], p)
