from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from syzmirror._intmath import det, matmul
from syzmirror.exceptions import NonSimplicialCell, NonSmoothCone
from syzmirror.laurent import newton_polytope, parse_laurent
from syzmirror.subdivision import LatticePolytope, is_unimodular, regular_subdivision
from syzmirror.toricfan import (
    Cone,
    Fan,
    calabi_yau_certificate,
    chart_transition,
    fan_from_subdivision,
    fan_report,
    octant_equivalence,
    smoothness_check,
    support_convexity,
    toric_chart,
)

SEGMENT = LatticePolytope.from_points([(0,), (2,)])
A1 = fan_from_subdivision(regular_subdivision(SEGMENT, lambda a: a * a))


def test_kp2_fan(kp2_subdivision):
    F = fan_from_subdivision(kp2_subdivision)
    assert set(F.rays) == {(0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, -1, 1)}
    assert calabi_yau_certificate(F) == (0, 0, 1)
    assert smoothness_check(F) and support_convexity(F)


def test_simplex_fan_is_octant(simplex_poly):
    F = fan_from_subdivision(regular_subdivision(newton_polytope(simplex_poly)))
    assert len(F.maximal_cones) == 1
    A = octant_equivalence(F.cone(0))
    assert abs(det(A)) == 1
    # A maps e_i to the generators
    for i, g in enumerate(F.cone(0).generators):
        assert [row[i] for row in A] == list(g)


def test_a1_fan():
    assert A1.rays == ((0, 1), (1, 1), (2, 1))
    assert len(A1.maximal_cones) == 2 and smoothness_check(A1)
    assert calabi_yau_certificate(A1) == (0, 1)


def test_cy_certificates_manual():
    p2 = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    assert calabi_yau_certificate(p2) is None
    octant = Fan(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), ((0, 1, 2),))
    assert calabi_yau_certificate(octant) == (1, 1, 1)


def test_unsubdivided_segment_not_smooth():
    F = fan_from_subdivision(regular_subdivision(SEGMENT, {(0,): 0, (2,): 0}))
    assert not smoothness_check(F)
    with pytest.raises(NonSmoothCone):
        toric_chart(F, 0)


def test_convexity_controls(kp2_subdivision):
    F = fan_from_subdivision(kp2_subdivision)
    assert not support_convexity(F.without_cone(0))
    assert not support_convexity(Fan(3, (), ()))


def test_chart_transitions(kp2_subdivision):
    assert chart_transition(A1, 0, 0) == [[1, 0], [0, 1]]
    assert chart_transition(A1, 0, 1) == [[2, -1], [1, 0]]
    F = fan_from_subdivision(kp2_subdivision)
    n = len(F.maximal_cones)
    for a, b, c in permutations(range(n), 3):
        M = matmul(matmul(chart_transition(F, a, b), chart_transition(F, b, c)), chart_transition(F, c, a))
        assert M == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_chart_transition_matches_characters():
    # x_tau[j] = prod_i x_sigma[i] ** M[i][j], checked on characters of the torus
    sigma, tau = toric_chart(A1, 0), toric_chart(A1, 1)
    M = chart_transition(A1, 0, 1)
    for j in range(2):
        combo = tuple(sum(M[i][j] * sigma.characters[i][k] for i in range(2)) for k in range(2))
        assert combo == tau.characters[j]


def test_octant_shuffle():
    octant = Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    shuffled = Cone(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    F = Fan(3, (), ())
    M = chart_transition(F, octant, shuffled)
    assert sorted(map(tuple, M)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_cone_validation():
    with pytest.raises(ValueError):
        Cone(((2, 0), (0, 1)))
    with pytest.raises(ValueError):
        Cone(((1, 0), (-1, 0)))


def test_report_schema(kp2_subdivision):
    rep = fan_report(fan_from_subdivision(kp2_subdivision))
    assert set(rep) == {"rays", "max_cones", "calabi_yau", "smooth", "convex_support"}


POLY = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2)])


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_smooth_iff_unimodular_and_eta(hs):
    S = regular_subdivision(POLY, dict(zip(sorted(POLY.lattice_points), hs)))
    F = fan_from_subdivision(S)
    assert calabi_yau_certificate(F) == (0, 0, 1)
    assert support_convexity(F)
    try:
        assert smoothness_check(F) == is_unimodular(S)
    except NonSimplicialCell:
        assert not smoothness_check(F)
