from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from syzmirror.exceptions import DimensionMismatch, MissingLiftingError, ParseError
from syzmirror.laurent import (
    Coefficient,
    LaurentPolynomial,
    newton_polytope,
    parse_laurent,
    tropicalize,
)
from syzmirror.subdivision import LatticePolytope


def terms(f):
    return {e: complex(c) for e, c in f.terms.items()}


def test_parse_simplex():
    assert terms(parse_laurent("1 + z1 + z2", 2)) == {(0, 0): 1, (1, 0): 1, (0, 1): 1}


def test_parse_kp2_with_parameter():
    f = parse_laurent("t + z1 + z2 + z1^-1*z2^-1", 2, {"t": 1})
    assert terms(f) == {(0, 0): 1, (1, 0): 1, (0, 1): 1, (-1, -1): 1}
    assert f == parse_laurent("t+z1+z2+1/(z1*z2)", 2, {"t": 1})


def test_parse_product_expands():
    f = parse_laurent("(z1-2)(z1-4)", 1)
    assert terms(f) == {(0,): 8, (1,): -6, (2,): 1}
    # brute-force convolution oracle
    a, b = {0: -2, 1: 1}, {0: -4, 1: 1}
    conv = {}
    for (i, x), (j, y) in product(a.items(), b.items()):
        conv[i + j] = conv.get(i + j, 0) + x * y
    assert terms(f) == {(k,): v for k, v in conv.items()}


def test_parse_complex_and_rational_coefficients():
    f = parse_laurent("1/2 z1 + 3i z2 - (1+i)", 2)
    assert f.terms[(1, 0)] == Coefficient(Fraction(1, 2))
    assert f.terms[(0, 1)] == Coefficient(0, 3)
    assert f.terms[(0, 0)] == Coefficient(-1, -1)


def test_zero_terms_dropped():
    f = parse_laurent("z1 - z1 + 2", 1)
    assert list(f.terms) == [(0,)]


@pytest.mark.parametrize("text", ["1 + + z1", "z1^", "(1 + z1", "z1 ^ 1.5", "z3"])
def test_parse_errors_carry_position(text):
    with pytest.raises((ParseError, DimensionMismatch)) as info:
        parse_laurent(text, 2)
    if isinstance(info.value, ParseError):
        assert info.value.position is not None


def test_dimension_mismatch_on_arithmetic():
    with pytest.raises(DimensionMismatch):
        parse_laurent("z1", 1) + parse_laurent("z1", 2)


def test_numeric_evaluation():
    f = parse_laurent("t + z1 + z2 + 1/(z1*z2)", 2, {"t": 3})
    z1, z2 = 1.5 - 0.2j, -0.7 + 1j
    assert abs(f(z1, z2) - (3 + z1 + z2 + 1 / (z1 * z2))) < 1e-12


def test_json_round_trip(kp2_poly):
    assert LaurentPolynomial.from_json(kp2_poly.to_json()) == kp2_poly


def test_newton_polytopes():
    P = newton_polytope(parse_laurent("1+z1+z2", 2))
    assert P.vertices == ((0, 0), (0, 1), (1, 0))
    assert sorted(P.lattice_points) == [(0, 0), (0, 1), (1, 0)]
    Q = newton_polytope(parse_laurent("t+z1+z2+1/(z1*z2)", 2, {"t": 1}))
    assert Q.vertices == ((-1, -1), (0, 1), (1, 0))
    assert (0, 0) in Q.lattice_points and len(Q.lattice_points) == 4
    S = newton_polytope(parse_laurent("(z-2)(z-4)", 1))
    assert S.vertices == ((0,), (2,)) and S.lattice_points == ((0,), (1,), (2,))


def test_tropicalize_examples():
    T = tropicalize(parse_laurent("1+z1+z2", 2))
    assert T.convention == "max-plus"
    assert T((Fraction(2), Fraction(-1))) == 2
    kp2 = parse_laurent("t+z1+z2+1/(z1*z2)", 2, {"t": 1})
    T2 = tropicalize(kp2, {(0, 0): -1, (1, 0): 0, (0, 1): 0, (-1, -1): 0})
    for x in [(0, 0), (3, -1), (-2, -2), (Fraction(1, 3), 5)]:
        assert T2(x) == max(x[0], x[1], -x[0] - x[1], 1)
    T3 = tropicalize(parse_laurent("1 + z + z^2", 1), lambda a: a * a)
    for x in [-3, 0, 1, 2, Fraction(7, 2)]:
        assert T3((x,)) == max(0, x - 1, 2 * x - 4)


def test_tropicalize_missing_height():
    with pytest.raises(MissingLiftingError):
        tropicalize(parse_laurent("1+z1+z2", 2), {(0, 0): 0, (1, 0): 0})


small_polys = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.integers(-5, 5).filter(bool),
    min_size=1,
    max_size=5,
).map(lambda d: LaurentPolynomial(2, d))


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys)
def test_newton_polytope_of_product_is_minkowski_sum(f, g):
    # generic integer coefficients could cancel a vertex term; vertices never cancel
    P, Q = newton_polytope(f), newton_polytope(g)
    mink = LatticePolytope.from_points([tuple(a + b for a, b in zip(p, q))
                                        for p in P.vertices for q in Q.vertices])
    assert newton_polytope(f * g).vertices == mink.vertices


@settings(max_examples=60, deadline=None)
@given(small_polys)
def test_string_round_trip(f):
    assert parse_laurent(f.to_string(), 2) == f


@settings(max_examples=30, deadline=None)
@given(small_polys, st.fractions(-5, 5, max_denominator=7))
def test_tropical_shift(f, c):
    T = tropicalize(f)
    shifted = tropicalize(f, {a: c for a in f.terms})
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = tuple(Fraction(int(v), 3) for v in rng.integers(-9, 10, 2))
        assert shifted(x) == T(x) - c


def test_euler_constant_unless_shadowed():
    import math
    f = parse_laurent("(z-e)(z-e^2)", 1)
    assert abs(f(math.e)) < 1e-9
    g = parse_laurent("z - e", 1, {"e": 3})
    assert abs(g(3)) < 1e-12
