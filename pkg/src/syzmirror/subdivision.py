"""Lattice polytopes, regular subdivisions and dual tropical curves.

Lower hulls are found by exhaustive face enumeration over the lifted point
configuration, all in exact integer arithmetic. Only ``d <= 2`` is handled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping

from . import _geometry as geo
from ._intmath import det, primitive, vgcd
from .exceptions import DimensionMismatch, MissingLiftingError, NonSimplicialCell
from .laurent import TropicalFunction, _fmt_fraction, as_lifting

__all__ = [
    "LatticePolytope",
    "RegularSubdivision",
    "DualTropicalCurve",
    "BoundedEdge",
    "Leg",
    "regular_subdivision",
    "is_unimodular",
    "dual_tropical_curve",
]


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    vertices: tuple
    lattice_points: tuple

    @classmethod
    def from_points(cls, points) -> "LatticePolytope":
        pts = sorted({tuple(int(a) for a in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        d = len(pts[0])
        if d == 1:
            lo, hi = pts[0][0], pts[-1][0]
            verts = ((lo,),) if lo == hi else ((lo,), (hi,))
            return cls(1, verts, tuple((x,) for x in range(lo, hi + 1)))
        if d != 2:
            raise DimensionMismatch("only dimensions 1 and 2 are supported")
        hull = geo.convex_hull_2d(pts)
        xs = [p[0] for p in hull]
        ys = [p[1] for p in hull]
        lattice = tuple(
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if geo.in_convex_polygon(hull, (x, y))
        )
        return cls(2, tuple(sorted(hull)), lattice)

    @property
    def boundary_cycle(self) -> list:
        """Vertices in counter-clockwise order (``d = 2``)."""
        if self.dim == 1:
            return list(self.vertices)
        return geo.convex_hull_2d(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.vertices) >= self.dim + 1

    def contains(self, p) -> bool:
        if self.dim == 1:
            return self.vertices[0][0] <= p[0] <= self.vertices[-1][0]
        return geo.in_convex_polygon(self.boundary_cycle, p)

    def normalized_volume(self):
        """``d!`` times the Euclidean volume (lattice length / twice the area)."""
        if self.dim == 1:
            return self.vertices[-1][0] - self.vertices[0][0]
        if len(self.vertices) < 3:
            return 0
        return abs(geo.polygon_double_area(self.boundary_cycle))

    def boundary_lattice_length(self) -> int:
        cyc = self.boundary_cycle
        if self.dim == 1:
            return 2 if len(cyc) == 2 else 0
        return sum(vgcd(b - a for a, b in zip(cyc[i], cyc[(i + 1) % len(cyc)]))
                   for i in range(len(cyc)))


def _cell_hull(cell):
    if len(cell[0]) == 1:
        return [min(cell), max(cell)]
    return geo.convex_hull_2d(cell)


@dataclass
class RegularSubdivision:
    polytope: LatticePolytope
    points: tuple
    lifting: dict
    cells: list
    adjacency: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.polytope.dim

    def cell_vertices(self, index) -> list:
        return _cell_hull(self.cells[index])

    def cell_normalized_volume(self, index):
        cyc = self.cell_vertices(index)
        if self.dim == 1:
            return cyc[1][0] - cyc[0][0]
        return abs(geo.polygon_double_area(cyc))

    def used_points(self) -> list:
        return sorted({p for cell in self.cells for p in cell})

    def edges(self) -> dict:
        """Map ``(p, q)`` (sorted hull-vertex pair) to the cells containing it (``d = 2``)."""
        out = {}
        for i in range(len(self.cells)):
            cyc = self.cell_vertices(i)
            for k in range(len(cyc)):
                key = tuple(sorted((cyc[k], cyc[(k + 1) % len(cyc)])))
                out.setdefault(key, []).append(i)
        return out

    def interior_edges(self) -> list:
        return sorted(e for e, cs in self.edges().items() if len(cs) == 2)

    def boundary_edges(self) -> list:
        return sorted(e for e, cs in self.edges().items() if len(cs) == 1)

    def locate(self, p) -> list:
        """Indices of the cells containing the (rational) point ``p``."""
        out = []
        for i in range(len(self.cells)):
            cyc = self.cell_vertices(i)
            inside = (cyc[0][0] <= p[0] <= cyc[1][0]) if self.dim == 1 else geo.in_convex_polygon(cyc, p)
            if inside:
                out.append(i)
        return out

    def to_json(self) -> dict:
        index = {p: i for i, p in enumerate(self.points)}
        return {
            "points": [list(p) for p in self.points],
            "lifting": {"(" + ",".join(map(str, p)) + ")": _fmt_fraction(v)
                        for p, v in self.lifting.items()},
            "cells": [[index[p] for p in cell] for cell in self.cells],
        }


def regular_subdivision(P: LatticePolytope, h: Mapping | None = None) -> RegularSubdivision:
    """Project the lower faces of ``{(a, h(a))}`` to a subdivision of ``P``.

    ``h`` defaults to zero on every lattice point of ``P``; a callable is
    evaluated on all lattice points. Ties are kept as non-simplicial cells.
    """
    if not P.is_full_dimensional:
        raise ValueError("the polytope must be full-dimensional")
    support = list(P.lattice_points)
    if h is None or (callable(h) and not isinstance(h, Mapping)):
        lifting = as_lifting(h, support, P.dim)
    else:
        lifting = as_lifting(h, support, P.dim)
    missing = [v for v in P.vertices if v not in lifting]
    if missing:
        raise MissingLiftingError(f"lifting misses vertices {missing}")
    outside = [a for a in lifting if not P.contains(a)]
    if outside:
        raise ValueError(f"lifting points {outside} lie outside the polytope")

    points = tuple(sorted(lifting))
    scale = lcm(*(v.denominator for v in lifting.values()))
    heights = [int(lifting[p] * scale) for p in points]
    lifted = [p + (hh,) for p, hh in zip(points, heights)]
    d = P.dim
    faces = set()
    for combo in combinations(range(len(points)), d + 1):
        if any(all(points[i] in face for i in combo) for face in faces):
            continue
        normal = _lower_normal([lifted[i] for i in combo], d)
        if normal is None:
            continue
        base = lifted[combo[0]]
        values = [sum(n * (q - b) for n, q, b in zip(normal, pt, base)) for pt in lifted]
        if min(values) < 0:
            continue
        faces.add(frozenset(points[i] for i, v in enumerate(values) if v == 0))
    cells = sorted(tuple(sorted(face)) for face in faces)

    adjacency = {}
    for i, j in combinations(range(len(cells)), 2):
        shared = tuple(sorted(set(cells[i]) & set(cells[j])))
        if len(shared) >= d and _affine_rank(shared) == d - 1:
            adjacency[(i, j)] = shared
            adjacency[(j, i)] = shared
    return RegularSubdivision(P, points, dict(sorted(lifting.items())), cells, adjacency)


def _lower_normal(pts, d):
    """Upward-oriented normal of the hyperplane through ``d + 1`` lifted points."""
    if d == 1:
        (x0, h0), (x1, h1) = pts
        if x0 == x1:
            return None
        n = (-(h1 - h0), x1 - x0)
    else:
        u = [a - b for a, b in zip(pts[1], pts[0])]
        v = [a - b for a, b in zip(pts[2], pts[0])]
        n = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if n[2] == 0:
            return None
    return tuple(-c for c in n) if n[-1] < 0 else n


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    if len(points[0]) == 1:
        return int(any(d[0] for d in diffs))
    if all(geo.cross(points[0], points[1], p) == 0 for p in points[2:]):
        return 1
    return 2


def is_unimodular(S: RegularSubdivision) -> bool:
    """True iff every cell, placed at height 1, spans a lattice basis."""
    for cell in S.cells:
        if len(cell) != S.dim + 1:
            raise NonSimplicialCell(cell)
    return all(abs(det([list(p) + [1] for p in cell])) == 1 for cell in S.cells)


@dataclass(frozen=True)
class BoundedEdge:
    cells: tuple
    labels: tuple
    start: tuple
    end: tuple
    direction: tuple

    @property
    def midpoint(self):
        return tuple((a + b) / 2 for a, b in zip(self.start, self.end))


@dataclass(frozen=True)
class Leg:
    cell: int
    labels: tuple
    base: tuple
    direction: tuple
    weight: int = 1


@dataclass
class DualTropicalCurve:
    """Corner locus of the tropical function attached to a subdivision.

    ``vertices`` maps cell index to an exact rational point. Every bounded edge
    and leg records the subdivision edge ``labels = (alpha, beta)`` it is dual
    to; those are the labels of the two complement regions it separates.
    """

    subdivision: RegularSubdivision
    vertices: dict
    bounded_edges: list
    legs: list
    tropical_function: TropicalFunction

    def dual_edges(self) -> list:
        return [e.labels for e in self.bounded_edges] + [l.labels for l in self.legs]

    def is_adjacent(self, alpha, beta) -> bool:
        key = tuple(sorted((tuple(alpha), tuple(beta))))
        return key in set(self.dual_edges())

    @property
    def labels(self) -> list:
        return self.subdivision.used_points()

    def vertex_cycles(self) -> dict:
        """Counter-clockwise label cycle around each curve vertex."""
        return {i: self.subdivision.cell_vertices(i) for i in self.vertices}

    def segments(self, leg_length=1.0) -> list:
        """Float segments for drawing; legs truncated at ``leg_length``."""
        out = [(tuple(map(float, e.start)), tuple(map(float, e.end))) for e in self.bounded_edges]
        for leg in self.legs:
            b = tuple(map(float, leg.base))
            n = sum(c * c for c in leg.direction) ** 0.5
            out.append((b, tuple(bi + leg_length * c / n for bi, c in zip(b, leg.direction))))
        return out

    def to_json(self) -> dict:
        pt = lambda p: [_fmt_fraction(Fraction(c)) for c in p]
        return {
            "vertices": {str(i): pt(v) for i, v in self.vertices.items()},
            "bounded_edges": [
                {"cells": list(e.cells), "labels": [list(a) for a in e.labels],
                 "start": pt(e.start), "end": pt(e.end), "direction": list(e.direction)}
                for e in self.bounded_edges
            ],
            "legs": [
                {"cell": l.cell, "labels": [list(a) for a in l.labels], "base": pt(l.base),
                 "direction": list(l.direction), "weight": l.weight}
                for l in self.legs
            ],
        }


def _rational_primitive(vec):
    den = lcm(*(Fraction(c).denominator for c in vec))
    return primitive([int(Fraction(c) * den) for c in vec])


def dual_tropical_curve(S: RegularSubdivision) -> DualTropicalCurve:
    """Vertices, bounded edges and legs of the tropical curve dual to ``S``."""
    if S.dim != 2:
        raise DimensionMismatch("dual tropical curves are only built for d = 2")
    h = S.lifting
    vertices = {}
    for i, cell in enumerate(S.cells):
        cyc = S.cell_vertices(i)
        a0, a1, a2 = cyc[0], cyc[1], cyc[2]
        m = [[a1[0] - a0[0], a1[1] - a0[1]], [a2[0] - a0[0], a2[1] - a0[1]]]
        rhs = [h[a1] - h[a0], h[a2] - h[a0]]
        dd = Fraction(m[0][0] * m[1][1] - m[0][1] * m[1][0])
        x = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / dd
        y = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / dd
        vertices[i] = (x, y)

    bounded, legs = [], []
    for (p, q), cs in sorted(S.edges().items()):
        if len(cs) == 2:
            c1, c2 = sorted(cs)
            start, end = vertices[c1], vertices[c2]
            direction = _rational_primitive([b - a for a, b in zip(start, end)])
            bounded.append(BoundedEdge((c1, c2), (p, q), start, end, direction))
        else:
            c = cs[0]
            other = next(r for r in S.cell_vertices(c) if r not in (p, q))
            dx, dy = q[0] - p[0], q[1] - p[1]
            n = (dy, -dx)
            if n[0] * (other[0] - p[0]) + n[1] * (other[1] - p[1]) > 0:
                n = (-dy, dx)
            legs.append(Leg(c, (p, q), vertices[c], primitive(n), vgcd((dx, dy))))
    trop = TropicalFunction(h)
    return DualTropicalCurve(S, vertices, bounded, legs, trop)
