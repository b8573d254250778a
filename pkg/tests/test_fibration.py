import math

import numpy as np
import pytest

from syzmirror.exceptions import EqualModulusRoots, OffHypersurface, SingularFiberPoint, ZeroCoordinate
from syzmirror.fibration import (
    ConicFibrationSpace,
    MonodromyMatrix,
    base_2d,
    base_3d,
    circle_action,
    fiber_lagrangian_residual,
    hamiltonian_residual,
    moment_map,
    monodromy_2d,
    on_hypersurface,
    syz_fibration_2d,
)
from syzmirror.laurent import parse_laurent

E = math.e
A1 = ConicFibrationSpace(parse_laurent("(z-2)(z-4)", 1))


def regular_point(rng, space=A1):
    z = complex(*rng.normal(size=2)) + 3
    x = complex(*rng.normal(size=2))
    return (x, space.f(z) / x, z)


def test_on_hypersurface():
    S = ConicFibrationSpace(parse_laurent("1+z1+z2", 2))
    assert on_hypersurface(S, (1, 3, 1, 1))
    assert not on_hypersurface(S, (1, 1, 1, 1))
    assert on_hypersurface(A1, (0, 5, 2))
    with pytest.raises(ZeroCoordinate):
        on_hypersurface(S, (1, 1, 0, 1))


@pytest.mark.parametrize("x, y, mu", [(1, 0, 0.5), (0, 1, -0.5), (1 + 1j, 1 - 1j, 0.0)])
def test_moment_map(x, y, mu):
    assert moment_map(x, y) == pytest.approx(mu)


def test_fibration_values():
    assert syz_fibration_2d(A1, (0, 5, 2)) == pytest.approx((math.log(2), -12.5))
    r = math.sqrt(3)
    assert syz_fibration_2d(A1, (r, r, 1)) == pytest.approx((0, 0))
    assert syz_fibration_2d(A1, (-1, 1, 3)) == pytest.approx((math.log(3), 0))
    with pytest.raises(OffHypersurface):
        syz_fibration_2d(A1, (1, 1, 1))


def test_circle_invariance(rng):
    for _ in range(5):
        p = regular_point(rng)
        base = np.array(syz_fibration_2d(A1, p))
        for theta in rng.uniform(0, 2 * np.pi, 20):
            assert np.abs(np.array(syz_fibration_2d(A1, circle_action(p, theta))) - base).max() < 1e-12


def test_moment_map_is_hamiltonian(rng):
    for _ in range(10):
        assert hamiltonian_residual(A1, regular_point(rng)) < 1e-8


def test_base_walls():
    f = parse_laurent("(z-e)(z-e^2)", 1, {"e": E})
    base = base_2d(ConicFibrationSpace(f))
    assert base.walls == pytest.approx((1.0, 2.0), abs=1e-9)
    assert len(base.chambers) == 3
    explicit = base_2d(ConicFibrationSpace(f), [E, E * E])
    assert explicit.walls == pytest.approx((1.0, 2.0), abs=1e-12)
    assert base_2d(ConicFibrationSpace(parse_laurent("z-1", 1))).walls == (0.0,)
    with pytest.raises(EqualModulusRoots):
        base_2d(ConicFibrationSpace(parse_laurent("(z-1)(z+1)", 1)))


def test_base_invariant_under_unit_scaling():
    f = parse_laurent("(z-2)(z-5)", 1)
    g = parse_laurent("(3/5 + 4/5 i)(z-2)(z-5)", 1)
    a, b = base_2d(ConicFibrationSpace(f)), base_2d(ConicFibrationSpace(g))
    assert a.walls == pytest.approx(b.walls, abs=1e-12)
    assert len(a.chambers) == len(b.chambers)


def test_base_report_schema():
    rep = base_2d(A1).to_json()
    assert set(rep) == {"walls", "chambers", "discriminant", "monodromy"}
    assert rep["monodromy"] == [[1, 1], [0, 1]]


def test_monodromy():
    assert monodromy_2d().tolist() == [[1, 1], [0, 1]]
    assert monodromy_2d(3).tolist() == [[1, 3], [0, 1]]
    m = monodromy_2d()
    assert (m @ m @ m) == monodromy_2d(3)
    assert m.inverse().tolist() == [[1, -1], [0, 1]] == monodromy_2d(-1).tolist()
    with pytest.raises(ValueError):
        MonodromyMatrix(((2, 0), (0, 1)))


def test_fibers_are_lagrangian(rng):
    for _ in range(20):
        assert fiber_lagrangian_residual(A1, regular_point(rng)) < 1e-8


def test_pinched_fiber_rank_drop():
    with pytest.raises(SingularFiberPoint):
        fiber_lagrangian_residual(A1, (0, 0, 2))


def test_non_lagrangian_control(rng):
    # (Re z, Re x) is not constant along a Lagrangian foliation
    values = [fiber_lagrangian_residual(A1, regular_point(rng), test_map="re_x") for _ in range(10)]
    assert max(values) > 1e-2


def test_circle_invariant_maps_are_lagrangian(rng):
    # any map (g(z), mu) has the circle orbit inside its fibers, so its fibers are isotropic
    for _ in range(10):
        assert fiber_lagrangian_residual(A1, regular_point(rng), test_map="re_z") < 1e-8


def test_base_3d_simplex():
    base = base_3d(ConicFibrationSpace(parse_laurent("1+z1+z2", 2)))
    assert base.chamber_labels == [(0, 0), (0, 1), (1, 0)]
    assert base.raster.box == (-4.0, 4.0, -4.0, 4.0)
    assert set(base.shared_chamber_pairs()) == {((0, 0), (0, 1)), ((0, 0), (1, 0)), ((0, 1), (1, 0))}
