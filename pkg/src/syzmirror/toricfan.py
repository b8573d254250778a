"""Toric fans over subdivisions: Calabi-Yau, smoothness and convexity certificates.

All linear algebra is exact. Cones carry an ordered generator list; the chart
of a smooth cone uses the dual basis in that order as its coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import _geometry as geo
from ._intmath import det, integer_inverse, inverse, lex_min_abs, matmul, minors_gcd, solve_integer, transpose, vgcd
from .exceptions import NonSmoothCone
from .subdivision import RegularSubdivision

__all__ = [
    "Cone",
    "Fan",
    "ToricChart",
    "fan_from_subdivision",
    "calabi_yau_certificate",
    "smoothness_check",
    "support_convexity",
    "chart_transition",
    "toric_chart",
    "octant_equivalence",
    "fan_report",
]


@dataclass(frozen=True)
class Cone:
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(int(c) for c in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if vgcd(g) != 1:
                raise ValueError(f"generator {g} is not primitive")
        if gens and _positive_functional(gens) is None:
            raise ValueError("cone is not strongly convex")

    @property
    def rank(self):
        return len(self.generators[0])

    @property
    def is_simplicial(self) -> bool:
        return _rank(self.generators) == len(self.generators)

    @property
    def is_smooth(self) -> bool:
        return self.is_simplicial and minors_gcd(self.generators) == 1

    def contains(self, x) -> bool:
        return _in_cone(self.generators, x)


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    maximal_cones: tuple

    def cone(self, index) -> Cone:
        return Cone(tuple(self.rays[i] for i in self.maximal_cones[index]))

    def cones(self) -> list:
        return [self.cone(i) for i in range(len(self.maximal_cones))]

    def without_cone(self, index) -> "Fan":
        cones = tuple(c for i, c in enumerate(self.maximal_cones) if i != index)
        used = sorted({r for c in cones for r in c})
        remap = {old: new for new, old in enumerate(used)}
        return Fan(self.rank, tuple(self.rays[i] for i in used),
                   tuple(tuple(remap[r] for r in c) for c in cones))


@dataclass(frozen=True)
class ToricChart:
    cone: Cone
    characters: tuple
    labels: tuple


def _rank(vectors) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _in_cone(generators, x) -> bool:
    """Exact membership by Caratheodory: some independent subset has x >= 0 coordinates."""
    x = [Fraction(c) for c in x]
    if all(c == 0 for c in x):
        return True
    n = len(x)
    for k in range(1, min(n, len(generators)) + 1):
        for subset in combinations(generators, k):
            if _rank(subset) != k:
                continue
            coeffs = _solve_least(subset, x)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return True
    return False


def _solve_least(subset, x):
    """Solve ``sum c_i g_i = x`` exactly for independent ``g_i``; ``None`` if inconsistent."""
    k = len(subset)
    for rows in combinations(range(len(x)), k):
        m = [[Fraction(g[r]) for g in subset] for r in rows]
        if det(m) == 0:
            continue
        inv = inverse(m)
        coeffs = [sum(inv[i][j] * x[rows[j]] for j in range(k)) for i in range(k)]
        if all(sum(c * g[r] for c, g in zip(coeffs, subset)) == x[r] for r in range(len(x))):
            return coeffs
        return None
    return None


def _positive_functional(vectors, bound=3):
    """A small integer covector strictly positive on ``vectors`` (or ``None``)."""
    n = len(vectors[0])
    candidates = sorted(product(range(-bound, bound + 1), repeat=n), key=lambda v: (sum(map(abs, v)), v))
    for eta in candidates:
        if all(sum(e * c for e, c in zip(eta, v)) > 0 for v in vectors):
            return eta
    return None


def fan_from_subdivision(S: RegularSubdivision) -> Fan:
    """Cones over the cells of ``S`` placed at height 1.

    Rays are the lifts ``(a, 1)`` of cell vertices; points lying in a cell
    without being one of its vertices do not produce rays.
    """
    cell_vertices = [S.cell_vertices(i) for i in range(len(S.cells))]
    used = sorted({p for cyc in cell_vertices for p in cyc})
    rays = tuple(tuple(p) + (1,) for p in used)
    index = {p: i for i, p in enumerate(used)}
    cones = tuple(tuple(sorted(index[p] for p in cyc)) for cyc in cell_vertices)
    return Fan(S.dim + 1, rays, cones)


def calabi_yau_certificate(F: Fan):
    """Integer ``eta`` with ``<eta, nu_i> = 1`` on every ray, or ``None``.

    Among several solutions the lexicographically smallest in absolute value
    is returned.
    """
    if not F.rays:
        raise ValueError("fan has no rays")
    sol = solve_integer([list(r) for r in F.rays], [1] * len(F.rays))
    if sol is None:
        return None
    x0, kernel = sol
    return tuple(lex_min_abs(x0, kernel))


def smoothness_check(F: Fan) -> bool:
    return all(c.is_smooth for c in F.cones())


def _slice_coordinates(F: Fan, eta):
    """Project the slice ``<eta, x> = 1`` to ``rank - 1`` coordinates."""
    drop = next(j for j, e in enumerate(eta) if e != 0)

    def project(v):
        s = Fraction(sum(e * c for e, c in zip(eta, v)))
        return tuple(Fraction(c) / s for j, c in enumerate(v) if j != drop)

    return project


def _slice_volume(points):
    if len(points[0]) == 1:
        xs = [p[0] for p in points]
        return max(xs) - min(xs)
    hull = geo.convex_hull_2d(points)
    return abs(geo.polygon_double_area(hull)) if len(hull) >= 3 else 0


def _in_slice(points, p):
    if len(points[0]) == 1:
        xs = [q[0] for q in points]
        return min(xs) <= p[0] <= max(xs)
    return geo.in_convex_polygon(geo.convex_hull_2d(points), p)


def support_convexity(F: Fan) -> bool:
    """Whether the union of the maximal cones is a convex cone.

    With a functional positive on all rays the fan is sliced to a polytope
    picture: cell volumes must add up to the hull volume, and facet midpoints
    and centroids of all cells and of the hull must be covered. Without one,
    the fan has to cover a deterministic sample of lattice directions.
    """
    if not F.rays or not F.maximal_cones:
        return False
    eta = calabi_yau_certificate(F) or _positive_functional(F.rays)
    if eta is None or F.rank > 3:
        probes = [v for v in product(range(-2, 3), repeat=F.rank) if any(v)]
        return all(any(c.contains(v) for c in F.cones()) for v in probes)
    if F.rank == 1:
        return True
    project = _slice_coordinates(F, eta)
    cells = [[project(g) for g in c.generators] for c in F.cones()]
    everything = [project(r) for r in F.rays]
    if sum(_slice_volume(c) for c in cells) != _slice_volume(everything):
        return False
    probes = []
    for pts in cells + [everything]:
        probes.extend(_probe_points(pts))
    return all(any(_in_slice(c, p) for c in cells) for p in probes)


def _probe_points(points):
    if len(points[0]) == 1:
        xs = sorted(p[0] for p in points)
        return [((xs[0] + xs[-1]) / 2,)]
    hull = geo.convex_hull_2d(points)
    out = []
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        out.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
    out.append((sum(p[0] for p in hull) / len(hull), sum(p[1] for p in hull) / len(hull)))
    return out


def _as_cone(F: Fan, c) -> Cone:
    return F.cone(c) if isinstance(c, int) else c


def _generator_matrix(cone: Cone):
    if not cone.is_smooth or len(cone.generators) != cone.rank:
        raise NonSmoothCone(f"cone {cone.generators} is not a smooth maximal cone")
    return transpose([list(g) for g in cone.generators])


def toric_chart(F: Fan, c) -> ToricChart:
    cone = _as_cone(F, c)
    inv = integer_inverse(_generator_matrix(cone))
    labels = tuple(f"x{k + 1}" for k in range(cone.rank))
    return ToricChart(cone, tuple(tuple(row) for row in inv), labels)


def chart_transition(F: Fan, sigma, tau):
    """Integer matrix ``M`` with ``x_tau[j] = prod_i x_sigma[i] ** M[i][j]``.

    Column ``j`` is the ``j``-th dual basis vector of ``tau`` written in the
    dual basis of ``sigma``.
    """
    g_sigma = _generator_matrix(_as_cone(F, sigma))
    g_tau = _generator_matrix(_as_cone(F, tau))
    return transpose(matmul(integer_inverse(g_tau), g_sigma))


def octant_equivalence(cone: Cone):
    """``A`` in ``GL_n(Z)`` with ``A e_i = g_i`` when the cone is a smooth octant."""
    if len(cone.generators) != cone.rank or not cone.is_smooth:
        return None
    return transpose([list(g) for g in cone.generators])


def fan_report(F: Fan) -> dict:
    eta = calabi_yau_certificate(F) if F.rays else None
    return {
        "rays": [list(r) for r in F.rays],
        "max_cones": [list(c) for c in F.maximal_cones],
        "calabi_yau": list(eta) if eta is not None else None,
        "smooth": smoothness_check(F),
        "convex_support": support_convexity(F),
    }
