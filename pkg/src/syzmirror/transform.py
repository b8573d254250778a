"""SYZ transforms of Lagrangian sections into line bundles on the mirror.

Three flavours live here: the semi-flat transform of a numeric section with
its curvature check, the two-dimensional transform of admissible paths and
the three-dimensional transform of tropical sections.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .exceptions import (
    DegeneratePathError,
    DimensionMismatch,
    InternalInconsistency,
    SectionValidationError,
)
from .gluing import CechLineBundle, GluingUnit

__all__ = [
    "NumericSection",
    "ConnectionField",
    "AdmissiblePath2D",
    "TropicalSection3D",
    "MirrorLineBundle",
    "semiflat_connection",
    "curvature02_residual",
    "winding_degree",
    "spiral_path",
    "intersection_number_2d",
    "wall_values_from_path",
    "random_admissible_path",
    "syz_transform_2d",
    "argument_principle_degree",
    "check_tropical_section",
    "validate_tropical_section",
    "syz_transform_3d",
]


@dataclass
class NumericSection:
    """A section ``x -> xi(x)`` of ``R^n x T^n -> R^n`` sampled on a box grid."""

    dim: int
    evaluator: Callable
    lower: float = -1.0
    upper: float = 1.0
    points_per_axis: int = 5

    def grid(self) -> np.ndarray:
        axis = np.linspace(self.lower, self.upper, self.points_per_axis)
        mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def __call__(self, x) -> np.ndarray:
        val = np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=float).reshape(-1)
        if val.shape != (self.dim,):
            raise DimensionMismatch(f"section returned shape {val.shape}, expected ({self.dim},)")
        if not np.all(np.isfinite(val)):
            raise ValueError(f"section is not finite at {x}")
        return val


@dataclass
class ConnectionField:
    """Coefficients of ``d + 2 pi i sum_j A_j(x) dy_j`` at the grid points."""

    points: np.ndarray
    coefficients: np.ndarray

    @property
    def is_trivial(self) -> bool:
        return bool(np.all(self.coefficients == 0))


def semiflat_connection(s: NumericSection, grid=None) -> ConnectionField:
    pts = s.grid() if grid is None else np.atleast_2d(np.asarray(grid, dtype=float))
    return ConnectionField(pts, np.array([s(x) for x in pts]))


def curvature02_residual(s: NumericSection, grid=None, h: float = 1e-4) -> float:
    """``max_x max_{i,j} |d_i xi_j - d_j xi_i|`` by central differences of step ``h``.

    Zero exactly when the graph of ``xi`` is Lagrangian, i.e. when the
    curvature of the transformed connection has no ``(0, 2)`` part.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    pts = s.grid() if grid is None else np.atleast_2d(np.asarray(grid, dtype=float))
    n = s.dim
    worst = 0.0
    for x in pts:
        jac = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            jac[:, j] = (s(x + e) - s(x - e)) / (2 * h)
        worst = max(worst, float(np.abs(jac - jac.T).max()))
    return worst


def _exact(z):
    z = complex(z)
    return Fraction(z.real), Fraction(z.imag)


def _crossing_x(p, q):
    """Real part where segment ``p -> q`` meets the real axis (signs of Im strictly opposite)."""
    (px, py), (qx, qy) = p, q
    return px + (qx - px) * (-py) / (qy - py)


def winding_degree(path) -> int:
    """Signed crossings of the negative real axis; passing from ``Im > 0`` to ``Im < 0`` counts +1."""
    pts = [_exact(z) for z in path]
    for x, y in pts:
        if x == 0 and y == 0:
            raise DegeneratePathError("path meets the origin")
        if y == 0 and x < 0:
            raise DegeneratePathError(f"vertex {float(x)} lies on the negative real axis")
    total = 0
    for p, q in zip(pts, pts[1:]):
        if p[1] * q[1] >= 0:
            continue
        x = _crossing_x(p, q)
        if x == 0:
            raise DegeneratePathError("path passes through the origin")
        if x < 0:
            total += 1 if p[1] > 0 else -1
    return total


def spiral_path(k: int, samples_per_turn: int = 15, growth: float = 0.1) -> list:
    """Polyline from ``1`` winding ``k`` times around ``0``; an odd sample count keeps vertices off the cut."""
    if samples_per_turn % 2 == 0:
        raise ValueError("samples_per_turn must be odd")
    n = abs(k) * samples_per_turn
    sign = 1 if k >= 0 else -1
    return [np.exp(growth * m / samples_per_turn) * np.exp(1j * sign * 2 * np.pi * m / samples_per_turn)
            for m in range(n + 1)]


@dataclass
class AdmissiblePath2D:
    """Polyline in ``C^*`` with a cut ``[a, b]`` on the positive real axis between the roots."""

    vertices: list
    cut: tuple
    start_ray: tuple | None = None
    end_ray: tuple | None = None

    def __post_init__(self):
        self.vertices = [complex(v) for v in self.vertices]
        a, b = (float(c) for c in self.cut)
        if not 0 < a < b:
            raise ValueError("cut must satisfy 0 < a < b")
        self.cut = (a, b)
        if len(self.vertices) < 2:
            raise ValueError("a path needs at least two vertices")
        pts = [_exact(v) for v in self.vertices]
        fa, fb = Fraction(a), Fraction(b)
        for x, y in pts:
            if y == 0 and fa <= x <= fb:
                raise DegeneratePathError(f"vertex {float(x)} lies on the cut [{a}, {b}]")
            if x == 0 and y == 0:
                raise DegeneratePathError("path meets the origin")
        for p, q in zip(pts, pts[1:]):
            if p[1] == 0 and q[1] == 0 and max(p[0], q[0]) >= fa and min(p[0], q[0]) <= fb:
                raise DegeneratePathError("segment runs along the cut")


def _signed_crossings(pts, lo: Fraction, hi: Fraction) -> int:
    """Upward crossings minus downward crossings of the open interval ``(lo, hi)``."""
    total = 0
    for p, q in zip(pts, pts[1:]):
        if p[1] * q[1] >= 0:
            continue
        x = _crossing_x(p, q)
        if x == lo or x == hi:
            raise DegeneratePathError(f"path crosses the real axis at the endpoint {float(x)}")
        if lo < x < hi:
            total += 1 if p[1] < 0 else -1
    return total


def intersection_number_2d(path: AdmissiblePath2D) -> int:
    """``gamma . [a, b]`` with upward crossings counted +1."""
    pts = [_exact(v) for v in path.vertices]
    return _signed_crossings(pts, Fraction(path.cut[0]), Fraction(path.cut[1]))


def wall_values_from_path(path: AdmissiblePath2D, roots=None) -> list:
    """``xi(s_i)``: cumulative crossings of ``(0, r_1), (r_1, r_2), ...`` with ``r`` the roots (default the cut)."""
    roots = list(path.cut) if roots is None else sorted(float(r) for r in roots)
    pts = [_exact(v) for v in path.vertices]
    edges = [Fraction(0)] + [Fraction(r) for r in roots]
    for r in roots:
        if any(y == 0 and x == Fraction(r) for x, y in pts):
            raise DegeneratePathError(f"path meets the root {r}")
    values, acc = [], 0
    for lo, hi in zip(edges, edges[1:]):
        acc += _signed_crossings(pts, lo, hi)
        values.append(acc)
    return values


def random_admissible_path(rng: np.random.Generator, cut, n_vertices: int = 6,
                           box=(-1.0, 7.0, -3.0, 3.0), attempts: int = 100) -> AdmissiblePath2D:
    """Random polyline in ``box`` avoiding the origin, the cut endpoints and tangencies."""
    xmin, xmax, ymin, ymax = box
    for _ in range(attempts):
        xs = rng.uniform(xmin, xmax, n_vertices)
        ys = rng.uniform(ymin, ymax, n_vertices)
        try:
            path = AdmissiblePath2D(list(xs + 1j * ys), cut)
            wall_values_from_path(path)
            intersection_number_2d(path)
            return path
        except DegeneratePathError:
            continue
    raise DegeneratePathError("could not sample an admissible path")


@dataclass
class MirrorLineBundle:
    bundle: CechLineBundle
    invariants: dict = field(default_factory=dict)
    label: str | None = None

    def to_json(self) -> dict:
        out = self.bundle.to_json()
        out["nerve"] = [[_jsonable(i), _jsonable(j)] for i, j in self.bundle.edges]
        out["invariants"] = dict(self.invariants)
        out["label"] = self.label
        out["cocycle"] = self.bundle.cocycle_holds()
        return out


def _jsonable(c):
    if isinstance(c, tuple):
        return [_jsonable(x) for x in c]
    return c


def syz_transform_2d(wall_values, base) -> MirrorLineBundle:
    """Cech bundle on the double-chamber charts ``U_{i-1,i}``, one per wall.

    Consecutive charts are glued by ``(1+w)^{-(xi(s_{i+1}) - xi(s_i))}``.
    """
    values = [int(v) if Fraction(v).denominator == 1 else None for v in wall_values]
    if any(v is None for v in values):
        raise SectionValidationError("wall values must be integers", location="wall_values")
    k = len(base.walls)
    if len(values) != k:
        raise DimensionMismatch(f"{len(values)} wall values for {k} walls")
    charts = [(i, i + 1) for i in range(k)]
    transitions = {(charts[i - 1], charts[i]): GluingUnit(1, 0, -(values[i] - values[i - 1]))
                   for i in range(1, k)}
    bundle = CechLineBundle(charts, transitions)
    degrees = [values[i] - values[i - 1] for i in range(1, k)]
    invariants = {"wall_values": values, "degrees": degrees}
    if k == 2:
        invariants["degree"] = degrees[0]
    return MirrorLineBundle(bundle, invariants, "structure sheaf" if bundle.is_trivial else None)


def argument_principle_degree(unit: GluingUnit, samples: int = 1024, radius: float = 0.5,
                              center: complex = -1.0) -> float:
    """``-(1 / 2 pi i) * integral g'/g dw`` over a circle around ``w = -1``.

    For ``g = (1+w)^{-n}`` this is ``n``. The trapezoid rule is applied to a
    central-difference derivative of ``g``.
    """
    theta = 2 * np.pi * np.arange(samples) / samples
    w = center + radius * np.exp(1j * theta)
    dw = 1j * radius * np.exp(1j * theta)
    h = 1e-6

    def g(v):
        return np.array([unit.evaluate((), x) for x in v])

    deriv = (g(w + h) - g(w - h)) / (2 * h)
    integral = np.mean(deriv / g(w) * dw) * 2 * np.pi
    return float(-(integral / (2j * np.pi)).real)


@dataclass
class TropicalSection3D:
    """Integers ``n_{alpha beta}`` on the dual edges, keyed by ordered label pairs."""

    values: dict

    def __post_init__(self):
        self.values = {(tuple(a), tuple(b)): Fraction(n) for (a, b), n in self.values.items()}

    def n(self, alpha, beta) -> Fraction:
        alpha, beta = tuple(alpha), tuple(beta)
        if (alpha, beta) in self.values:
            return self.values[(alpha, beta)]
        if (beta, alpha) in self.values:
            return -self.values[(beta, alpha)]
        raise KeyError(f"no value on the edge {alpha}-{beta}")

    @classmethod
    def zero(cls, curve) -> "TropicalSection3D":
        return cls({pair: 0 for pair in curve.dual_edges()})

    @classmethod
    def constant_slope(cls, curve, m) -> "TropicalSection3D":
        return cls({(a, b): sum(mi * (bi - ai) for mi, ai, bi in zip(m, a, b))
                    for a, b in curve.dual_edges()})

    @classmethod
    def from_gradient(cls, curve, grad) -> "TropicalSection3D":
        """``n = <grad g, beta - alpha>`` at each leg base and bounded-edge midpoint."""
        def at(point):
            return grad(point) if callable(grad) else grad

        values = {}
        for e in curve.bounded_edges:
            values[e.labels] = _pair(at(e.midpoint), e.labels)
        for leg in curve.legs:
            values[leg.labels] = _pair(at(leg.base), leg.labels)
        return cls(values)

    def __add__(self, other: "TropicalSection3D") -> "TropicalSection3D":
        keys = set(self.values) | {k for k in other.values if (k[1], k[0]) not in self.values}
        return TropicalSection3D({k: self.n(*k) + other.n(*k) for k in keys})

    def to_json(self) -> dict:
        return {"legs": [{"alpha": list(a), "beta": list(b), "n": _num(n)}
                         for (a, b), n in sorted(self.values.items())]}

    @classmethod
    def from_json(cls, data) -> "TropicalSection3D":
        try:
            return cls({(tuple(e["alpha"]), tuple(e["beta"])): _parse_num(e["n"]) for e in data["legs"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise SectionValidationError(f"malformed section: {exc}", location="legs") from exc


def _pair(g, labels):
    a, b = labels
    value = sum(Fraction(gi) * (bi - ai) for gi, ai, bi in zip(g, a, b))
    nearest = round(value)
    return Fraction(nearest) if abs(value - nearest) < Fraction(1, 10 ** 9) else value


def _num(n: Fraction):
    return int(n) if n.denominator == 1 else str(n)


def _parse_num(n):
    if isinstance(n, float):
        return Fraction(n)
    return Fraction(str(n))


def check_tropical_section(s: TropicalSection3D, curve):
    """``(ok, message, location)`` for the first violated constraint."""
    edges = set(curve.dual_edges())
    for (a, b) in s.values:
        if tuple(sorted((a, b))) not in edges:
            return False, "no dual edge between these labels", (a, b)
    for e in sorted(edges):
        if e not in s.values and (e[1], e[0]) not in s.values:
            return False, "dual edge without a value", e
    for (a, b), n in sorted(s.values.items()):
        if n.denominator != 1:
            return False, f"integrality violated: n = {n}", (a, b)
        if (b, a) in s.values and s.values[(b, a)] != -n:
            return False, "antisymmetry violated", (a, b)
    for vertex, cycle in sorted(curve.vertex_cycles().items()):
        total = sum(s.n(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
        if total != 0:
            return False, f"vertex sum is {total}", tuple(float(c) for c in curve.vertices[vertex])
    return True, "", None


def validate_tropical_section(s: TropicalSection3D, curve, raise_errors: bool = False) -> bool:
    ok, message, location = check_tropical_section(s, curve)
    if not ok and raise_errors:
        raise SectionValidationError(message, location=location)
    return ok


def _oriented_charts(curve) -> list:
    """Dual edges ``(alpha, beta)`` ordered along the counter-clockwise cycle of their first cell."""
    S = curve.subdivision
    charts = []
    for (p, q), cells in sorted(S.edges().items()):
        cycle = S.cell_vertices(min(cells))
        i = cycle.index(p)
        charts.append((p, q) if cycle[(i + 1) % len(cycle)] == q else (q, p))
    return charts


def syz_transform_3d(s: TropicalSection3D, base) -> MirrorLineBundle:
    """Cech bundle on the charts ``U_{alpha beta}``, one per dual edge.

    On ``U_{alpha beta}`` the section's fiber coordinate is
    0 over ``alpha`` and ``n_{alpha beta}`` over ``beta``; two charts sharing a
    chamber are glued by ``(1+w)`` to the difference of those coordinates.
    """
    curve = getattr(base, "curve", base)
    validate_tropical_section(s, curve, raise_errors=True)
    charts = _oriented_charts(curve)

    def level(chart, chamber):
        lo, hi = chart
        return 0 if chamber == lo else int(s.n(lo, hi))

    transitions = {}
    for i, c1 in enumerate(charts):
        for c2 in charts[i + 1:]:
            shared = set(c1) & set(c2)
            if len(shared) == 1:
                (sigma,) = shared
                transitions[(c1, c2)] = GluingUnit(1, 0, level(c1, sigma) - level(c2, sigma))
    bundle = CechLineBundle(charts, transitions)
    if not bundle.cocycle_holds():
        raise InternalInconsistency("validated section produced a non-cocycle")
    return MirrorLineBundle(bundle, {}, "structure sheaf" if bundle.is_trivial else None)
