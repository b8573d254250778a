"""The conic fibration ``xy = f(z)``, its circle moment map and the SYZ bases."""
from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .amoeba import AmoebaRaster, ChamberLabeling, amoeba_raster, chamber_labeling, default_box
from .exceptions import (
    DimensionMismatch,
    EqualModulusRoots,
    OffHypersurface,
    SingularFiberPoint,
    ZeroCoordinate,
)
from .laurent import LaurentPolynomial, as_lifting, log_lifting, newton_polytope
from .subdivision import DualTropicalCurve, dual_tropical_curve, regular_subdivision

__all__ = [
    "ConicFibrationSpace",
    "SYZBase2D",
    "SYZBase3D",
    "MonodromyMatrix",
    "on_hypersurface",
    "moment_map",
    "syz_fibration_2d",
    "base_2d",
    "base_3d",
    "monodromy_2d",
    "fiber_lagrangian_residual",
    "hamiltonian_residual",
    "circle_action",
    "TEST_MAPS",
]


@dataclass(frozen=True)
class ConicFibrationSpace:
    """The hypersurface ``{xy = f(z)}`` in ``C^2 x (C^*)^d``."""

    f: LaurentPolynomial

    def __post_init__(self):
        if not isinstance(self.f, LaurentPolynomial):
            raise TypeError("f must be a LaurentPolynomial")
        if len(self.f) == 0:
            raise ValueError("f must be nonzero")

    @property
    def dim(self) -> int:
        """Complex dimension of the total space."""
        return self.f.dim + 1

    def split(self, point):
        pt = tuple(complex(c) for c in point)
        if len(pt) != self.f.dim + 2:
            raise DimensionMismatch(f"expected {self.f.dim + 2} coordinates, got {len(pt)}")
        x, y, z = pt[0], pt[1], pt[2:]
        if any(zj == 0 for zj in z):
            raise ZeroCoordinate("z-coordinates must be nonzero")
        return x, y, z


def on_hypersurface(space: ConicFibrationSpace, point, tol: float = 1e-8) -> bool:
    x, y, z = space.split(point)
    fz = space.f(*z)
    return abs(x * y - fz) < tol * (1 + abs(fz))


def moment_map(x, y) -> float:
    """``(|x|^2 - |y|^2) / 2``, the Hamiltonian of ``(x, y) -> (e^{it} x, e^{-it} y)``."""
    return 0.5 * (abs(complex(x)) ** 2 - abs(complex(y)) ** 2)


def circle_action(point, theta: float):
    x, y, *z = (complex(c) for c in point)
    u = np.exp(1j * theta)
    return (u * x, y / u, *z)


def syz_fibration_2d(space: ConicFibrationSpace, point, tol: float = 1e-8):
    if space.f.dim != 1:
        raise DimensionMismatch("the explicit fibration needs a one-variable f")
    if not on_hypersurface(space, point, tol):
        raise OffHypersurface(f"{point} is not on xy = f(z)")
    x, y, (z,) = space.split(point)
    return (log(abs(z)), moment_map(x, y))


@dataclass(frozen=True)
class MonodromyMatrix:
    """Monodromy on fiber homology; ``loops`` counts counter-clockwise turns around the pair of singular fibers."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != 2 or any(len(r) != 2 for r in m):
            raise ValueError("monodromy must be 2x2")
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1:
            raise ValueError("monodromy must have determinant 1")

    def __matmul__(self, other: "MonodromyMatrix") -> "MonodromyMatrix":
        a, b = self.matrix, other.matrix
        return MonodromyMatrix(tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                                     for i in range(2)))

    def inverse(self) -> "MonodromyMatrix":
        (a, b), (c, d) = self.matrix
        return MonodromyMatrix(((d, -b), (-c, a)))

    def tolist(self):
        return [list(r) for r in self.matrix]


def monodromy_2d(loops: int = 1) -> MonodromyMatrix:
    """``[[1, k], [0, 1]]`` for ``k`` counter-clockwise loops; negative ``k`` turns clockwise."""
    return MonodromyMatrix(((1, int(loops)), (0, 1)))


@dataclass(frozen=True)
class SYZBase2D:
    walls: tuple
    root_moduli: tuple

    @property
    def chambers(self) -> list:
        edges = (-float("inf"),) + self.walls + (float("inf"),)
        return list(zip(edges[:-1], edges[1:]))

    @property
    def discriminant(self) -> list:
        return [(s, 0.0) for s in self.walls]

    def chamber_of(self, s: float) -> int:
        if any(s == w for w in self.walls):
            raise ValueError(f"{s} lies on a wall")
        return sum(1 for w in self.walls if w < s)

    def to_json(self) -> dict:
        def bound(x):
            return None if np.isinf(x) else x

        return {
            "walls": list(self.walls),
            "chambers": [[bound(a), bound(b)] for a, b in self.chambers],
            "discriminant": [list(p) for p in self.discriminant],
            "monodromy": monodromy_2d().tolist(),
        }


def _root_moduli(f: LaurentPolynomial):
    lo = min(a[0] for a in f.exponents)
    hi = max(a[0] for a in f.exponents)
    coeffs = [complex(f.terms[(k,)]) if (k,) in f.terms else 0j for k in range(hi, lo - 1, -1)]
    return sorted(abs(r) for r in np.roots(coeffs))


def base_2d(space: ConicFibrationSpace, root_moduli=None, gap: float = 1e-9) -> SYZBase2D:
    """Walls ``s_i = log|r_i|`` for the roots of ``f``.

    Without ``root_moduli`` the roots come from companion-matrix eigenvalues.
    """
    if space.f.dim != 1:
        raise DimensionMismatch("base_2d needs a one-variable f")
    if gap <= 0:
        raise ValueError("gap must be positive")
    moduli = sorted(float(m) for m in (root_moduli if root_moduli is not None else _root_moduli(space.f)))
    if any(m <= 0 for m in moduli):
        raise ValueError("root moduli must be positive")
    for a, b in zip(moduli, moduli[1:]):
        if (b - a) <= gap * b:
            raise EqualModulusRoots(f"roots of modulus {a!r} and {b!r} are not separated")
    return SYZBase2D(tuple(log(m) for m in moduli), tuple(moduli))


def _real_rows(coeffs):
    """Real 2x(2n) matrix of the complex covector ``sum c_k dw_k``."""
    re, im = [], []
    for c in coeffs:
        re += [c.real, -c.imag]
        im += [c.imag, c.real]
    return np.array([re, im])


def _tangent_data(space, point, test_map):
    if space.f.dim != 1:
        raise DimensionMismatch("the fiber check needs a one-variable f")
    x, y, (z,) = space.split(point)
    df = space.f.derivative(0)
    fprime = complex(df(z)) if df is not None else 0j
    constraint = _real_rows([y, x, -fprime])
    dmu = np.array([x.real, x.imag, -y.real, -y.imag, 0.0, 0.0])
    first = TEST_MAPS[test_map](x, y, z)
    jac = np.vstack([constraint, first, dmu])
    return jac, np.array([1.0, 1.0, 1.0, 1.0, 1.0 / abs(z) ** 2, 1.0 / abs(z) ** 2])


def _omega(weights, a, b):
    """``-sum_k w_k du_k ^ dv_k`` on real vectors ``(u1, v1, u2, v2, u3, v3)``."""
    w = weights[::2]
    return -float(np.sum(w * (a[0::2] * b[1::2] - a[1::2] * b[0::2])))


TEST_MAPS = {
    # d log|z|
    "syz": lambda x, y, z: np.array([0, 0, 0, 0, (1 / z).real, -(1 / z).imag]),
    "re_z": lambda x, y, z: np.array([0, 0, 0, 0, 1.0, 0.0]),
    "re_x": lambda x, y, z: np.array([1.0, 0, 0, 0, 0, 0]),
}


def fiber_lagrangian_residual(space: ConicFibrationSpace, point, tol: float = 1e-8,
                              test_map: str = "syz") -> float:
    """Largest ``|omega(u, v)|`` over an orthonormal basis of the fiber tangent space.

    The fiber is cut out in ``X`` by ``(g, mu)`` where ``g`` is ``log|z|``
    (``test_map="syz"``) or one of the comparison maps in ``TEST_MAPS``.
    """
    if test_map not in TEST_MAPS:
        raise ValueError(f"unknown test map {test_map!r}")
    if not on_hypersurface(space, point, tol):
        raise OffHypersurface(f"{point} is not on xy = f(z)")
    jac, weights = _tangent_data(space, point, test_map)
    _, sing, vt = np.linalg.svd(jac)
    if sing[-1] <= 1e-8 * max(sing[0], 1.0):
        raise SingularFiberPoint(f"the fiber map drops rank at {point}")
    kernel = vt[4:]
    return max(abs(_omega(weights, kernel[i], kernel[j])) for i in range(2) for j in range(i + 1, 2))


def hamiltonian_residual(space: ConicFibrationSpace, point) -> float:
    """``max |d mu(u) - omega(V, u)|`` over an orthonormal basis of ``T_p X``; ``V`` is the circle action field."""
    x, y, (z,) = space.split(point)
    df = space.f.derivative(0)
    fprime = complex(df(z)) if df is not None else 0j
    _, _, vt = np.linalg.svd(_real_rows([y, x, -fprime]))
    basis = vt[2:]
    weights = np.array([1.0, 1.0, 1.0, 1.0, 1.0 / abs(z) ** 2, 1.0 / abs(z) ** 2])
    vx, vy = 1j * x, -1j * y
    field = np.array([vx.real, vx.imag, vy.real, vy.imag, 0.0, 0.0])
    dmu = np.array([x.real, x.imag, -y.real, -y.imag, 0.0, 0.0])
    return max(abs(dmu @ u - _omega(weights, field, u)) for u in basis)


@dataclass
class SYZBase3D:
    """Combinatorial base ``R^2 x R_{>0}``: walls are the amoeba times the vertical line."""

    space: ConicFibrationSpace
    curve: DualTropicalCurve
    raster: AmoebaRaster
    labeling: ChamberLabeling

    @property
    def chamber_labels(self) -> list:
        return sorted(self.labeling.labels.values())

    def shared_chamber_pairs(self) -> list:
        """Label pairs ``(alpha, beta)`` of adjacent chambers, one per dual edge."""
        return sorted(set(self.curve.dual_edges()))

    def to_json(self) -> dict:
        return {
            "chambers": self.labeling.to_json()["chambers"],
            "curve": self.curve.to_json(),
            "raster": self.raster.to_json(),
            "walls": "amoeba x R",
        }


def base_3d(space: ConicFibrationSpace, lifting=None, box=None, resolution: int = 64,
            tol: float = 1e-6, margin: float = 4.0) -> SYZBase3D:
    f = space.f
    if f.dim != 2:
        raise DimensionMismatch("base_3d needs a two-variable f")
    poly = newton_polytope(f)
    h = log_lifting(f) if lifting is None else as_lifting(lifting, poly.lattice_points, 2)
    curve = dual_tropical_curve(regular_subdivision(poly, h))
    raster = amoeba_raster(f, box if box is not None else default_box(curve, margin), resolution, tol)
    return SYZBase3D(space, curve, raster, chamber_labeling(raster, f))
