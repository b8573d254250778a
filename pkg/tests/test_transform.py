from fractions import Fraction

import numpy as np
import pytest

from syzmirror.exceptions import DegeneratePathError, DimensionMismatch, SectionValidationError
from syzmirror.fibration import ConicFibrationSpace, base_2d, base_3d
from syzmirror.gluing import GluingUnit, verify_cocycle
from syzmirror.laurent import parse_laurent
from syzmirror.transform import (
    AdmissiblePath2D,
    NumericSection,
    TropicalSection3D,
    argument_principle_degree,
    curvature02_residual,
    intersection_number_2d,
    random_admissible_path,
    semiflat_connection,
    spiral_path,
    syz_transform_2d,
    syz_transform_3d,
    validate_tropical_section,
    wall_values_from_path,
    winding_degree,
)

BASE = base_2d(ConicFibrationSpace(parse_laurent("(z-2)(z-4)", 1)))


def test_semiflat_examples():
    assert semiflat_connection(NumericSection(2, lambda x: np.zeros(2))).is_trivial
    s = NumericSection(1, lambda x: x)
    field = semiflat_connection(s)
    assert np.allclose(field.coefficients[:, 0], field.points[:, 0])
    g = semiflat_connection(NumericSection(2, lambda x: np.array([2 * x[0] * x[1], x[0] ** 2])))
    x1, x2 = g.points.T
    assert np.allclose(g.coefficients, np.stack([2 * x1 * x2, x1 ** 2], axis=1))


def test_section_contract():
    with pytest.raises(DimensionMismatch):
        NumericSection(2, lambda x: np.zeros(3))([0, 0])
    with pytest.raises(ValueError):
        curvature02_residual(NumericSection(1, lambda x: np.sqrt(x) if x[0] > 0 else np.array([np.nan])))


def test_curvature_examples(rng):
    M = rng.normal(size=(3, 3))
    M = M + M.T
    assert curvature02_residual(NumericSection(3, lambda x: M @ x)) < 1e-9
    rot = curvature02_residual(NumericSection(2, lambda x: np.array([x[1], -x[0]])))
    assert abs(rot - 2) < 1e-6
    c = rng.normal(size=4)
    grad_cubic = NumericSection(2, lambda x: np.array([3 * c[0] * x[0] ** 2 + 2 * c[1] * x[0] * x[1] + c[2] * x[1] ** 2,
                                                       c[1] * x[0] ** 2 + 2 * c[2] * x[0] * x[1] + 3 * c[3] * x[1] ** 2]))
    assert curvature02_residual(grad_cubic, h=1e-4) < 1e-5
    with pytest.raises(ValueError):
        curvature02_residual(grad_cubic, h=0)


def test_antisymmetric_part_bounds_residual(rng):
    # a gradient plus c times a rotation keeps residual >= c / 2
    for c in (0.01, 0.3, 1.0):
        s = NumericSection(2, lambda x, c=c: np.array([x[0] ** 3 + c * x[1], x[1] ** 2 - c * x[0]]))
        assert curvature02_residual(s, h=1e-3) >= c / 2


def test_winding_examples():
    assert winding_degree([1, 2, 5 + 0.1j]) == 0
    for k in range(-3, 4):
        assert winding_degree(spiral_path(k)) == k
    assert winding_degree([1j, -1 - 1j]) == 1
    assert winding_degree([-1 - 1j, 1j]) == -1
    with pytest.raises(DegeneratePathError):
        winding_degree([1j, -2, -1j])
    with pytest.raises(DegeneratePathError):
        winding_degree([-1 - 1j, 1 + 1j])
    with pytest.raises(ValueError):
        spiral_path(1, samples_per_turn=16)


def test_winding_additive():
    a, b = spiral_path(2), spiral_path(1)
    scale = a[-1]
    joined = a + [scale * v for v in b[1:]]
    assert winding_degree(joined) == 3


def test_intersection_examples():
    assert intersection_number_2d(AdmissiblePath2D([1 + 1j, 3 + 2j, 6 + 1j], (2, 4))) == 0
    assert intersection_number_2d(AdmissiblePath2D([3 - 1j, 3 + 1j], (2, 4))) == 1
    assert intersection_number_2d(AdmissiblePath2D([3 - 1j, 3 + 1j, 3.5 - 1j], (2, 4))) == 0
    assert intersection_number_2d(AdmissiblePath2D([3 + 1j, 3 - 1j], (2, 4))) == -1
    assert intersection_number_2d(AdmissiblePath2D([5 - 1j, 5 + 1j], (2, 4))) == 0


def test_admissibility_errors():
    with pytest.raises(DegeneratePathError):
        AdmissiblePath2D([1j, 3, -1j], (2, 4))
    with pytest.raises(DegeneratePathError):
        AdmissiblePath2D([1 + 0j, 5 + 0j], (2, 4))
    with pytest.raises(DegeneratePathError):
        intersection_number_2d(AdmissiblePath2D([2 - 1j, 2 + 1j], (2, 4)))
    with pytest.raises(ValueError):
        AdmissiblePath2D([1j, -1j], (4, 2))
    with pytest.raises(ValueError):
        AdmissiblePath2D([1j], (2, 4))


def test_transform_2d_examples():
    zero = syz_transform_2d([0, 0], BASE)
    assert zero.invariants["degree"] == 0 and zero.label == "structure sheaf"
    one = syz_transform_2d([0, 1], BASE)
    assert one.invariants["degree"] == 1
    (edge,) = one.bundle.edges
    unit = one.bundle.transition(*edge)
    assert unit == GluingUnit(1, 0, -1)
    assert abs(argument_principle_degree(unit) - 1) < 1e-3
    a, b = [1, 3], [-2, 0]
    assert syz_transform_2d([x + y for x, y in zip(a, b)], BASE).invariants["degree"] == \
        syz_transform_2d(a, BASE).invariants["degree"] + syz_transform_2d(b, BASE).invariants["degree"]
    with pytest.raises(DimensionMismatch):
        syz_transform_2d([0], BASE)
    with pytest.raises(SectionValidationError):
        syz_transform_2d([0, Fraction(1, 2)], BASE)


@pytest.mark.parametrize("n", [-3, -1, 0, 2, 5])
def test_argument_principle(n):
    assert abs(argument_principle_degree(GluingUnit(1, 0, -n)) - n) < 1e-3


def test_degree_identity(rng):
    for _ in range(25):
        path = random_admissible_path(rng, (2.0, 4.0))
        assert syz_transform_2d(wall_values_from_path(path), BASE).invariants["degree"] == intersection_number_2d(path)


def test_wall_values_of_crossing_path():
    assert wall_values_from_path(AdmissiblePath2D([3 - 1j, 3 + 1j], (2, 4))) == [0, 1]
    assert wall_values_from_path(AdmissiblePath2D([1 - 1j, 1 + 1j], (2, 4))) == [1, 1]


def test_validation_examples(simplex_curve, kp2_curve):
    for curve in (simplex_curve, kp2_curve):
        assert validate_tropical_section(TropicalSection3D.zero(curve), curve)
        assert validate_tropical_section(TropicalSection3D.constant_slope(curve, (2, -1)), curve)
    s = TropicalSection3D.zero(simplex_curve)
    key = next(iter(s.values))
    s.values[key] = Fraction(1, 2)
    assert not validate_tropical_section(s, simplex_curve)
    with pytest.raises(SectionValidationError, match="integrality"):
        validate_tropical_section(s, simplex_curve, raise_errors=True)
    s.values[key] = Fraction(1)
    with pytest.raises(SectionValidationError, match="vertex sum"):
        validate_tropical_section(s, simplex_curve, raise_errors=True)


def test_from_gradient_gates_integrality(simplex_curve):
    s = TropicalSection3D.from_gradient(simplex_curve, lambda p: (1, 0))
    assert s.values == TropicalSection3D.constant_slope(simplex_curve, (1, 0)).values
    half = TropicalSection3D.from_gradient(simplex_curve, lambda p: (0.5, 0))
    assert not validate_tropical_section(half, simplex_curve)


def test_transform_3d_examples(simplex_curve):
    zero = syz_transform_3d(TropicalSection3D.zero(simplex_curve), simplex_curve)
    assert zero.label == "structure sheaf" and zero.bundle.is_trivial
    b = syz_transform_3d(TropicalSection3D.constant_slope(simplex_curve, (1, 0)), simplex_curve)
    exps = [b.bundle.transition(*e).opw_exp for e in b.bundle.edges]
    # exponents are beta_1 - alpha_1 over the three chamber pairs: 0, 1, 1 up to orientation
    assert sorted(map(abs, exps)) == [0, 1, 1] and b.bundle.cocycle_holds()


def test_transform_3d_tensor(kp2_curve):
    s1 = TropicalSection3D.constant_slope(kp2_curve, (1, 0))
    s2 = TropicalSection3D.constant_slope(kp2_curve, (-1, 2))
    b1, b2, b12 = (syz_transform_3d(s, kp2_curve).bundle for s in (s1, s2, s1 + s2))
    for e in b12.edges:
        assert b12.transition(*e) == b1.transition(*e) * b2.transition(*e)
    for tri in b12.triangles():
        assert b12.transition(tri[0], tri[1]) * b12.transition(tri[1], tri[2]) * b12.transition(tri[2], tri[0]) == GluingUnit()


def test_transform_3d_accepts_base():
    base = base_3d(ConicFibrationSpace(parse_laurent("1+z1+z2", 2)))
    out = syz_transform_3d(TropicalSection3D.zero(base.curve), base)
    assert out.to_json()["label"] == "structure sheaf"


def test_section_json_roundtrip(kp2_curve):
    s = TropicalSection3D.constant_slope(kp2_curve, (1, 1))
    assert TropicalSection3D.from_json(s.to_json()).values == s.values
    with pytest.raises(SectionValidationError):
        TropicalSection3D.from_json({"legs": [{"alpha": [0, 0]}]})
