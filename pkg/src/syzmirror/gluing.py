"""Exact algebra of wall-crossing units ``c * w^a * (1+w)^k * u^m`` and chart gluings.

A gluing never moves ``w``, so substituting one gluing into another stays
inside this unit group and identities are decided on the normal form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._intmath import det, integer_inverse
from .exceptions import ChartMismatch, NonAdjacentLabels, NonClosedLoop

__all__ = [
    "GluingUnit",
    "ChartGluing",
    "CechLineBundle",
    "TorusIdentification",
    "compose",
    "identity_gluing",
    "verify_cocycle",
    "wall_crossing_2d",
    "wall_crossing_3d",
    "toric_identification",
    "toric_identification_2d",
]


def _pad(m, n):
    return tuple(m) + (0,) * (n - len(m))


@dataclass(frozen=True)
class GluingUnit:
    coefficient: Fraction = Fraction(1)
    w_exp: int = 0
    opw_exp: int = 0
    monomial: tuple = ()

    def __post_init__(self):
        c = Fraction(self.coefficient)
        if c == 0:
            raise ValueError("unit coefficient must be nonzero")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "w_exp", int(self.w_exp))
        object.__setattr__(self, "opw_exp", int(self.opw_exp))
        object.__setattr__(self, "monomial", tuple(int(a) for a in self.monomial))

    @classmethod
    def from_factors(cls, coefficient=1, w_exp=0, opw_exp=0, opw_inv_exp=0, monomial=()):
        """Normalize ``c w^a (1+w)^k (1+w^{-1})^l u^m`` using ``1 + w^{-1} = w^{-1}(1+w)``."""
        return cls(coefficient, w_exp - opw_inv_exp, opw_exp + opw_inv_exp, monomial)

    @classmethod
    def coordinate(cls, j: int, n: int) -> "GluingUnit":
        return cls(1, 0, 0, tuple(1 if i == j else 0 for i in range(n)))

    def __mul__(self, other: "GluingUnit") -> "GluingUnit":
        n = max(len(self.monomial), len(other.monomial))
        mono = tuple(a + b for a, b in zip(_pad(self.monomial, n), _pad(other.monomial, n)))
        return GluingUnit(self.coefficient * other.coefficient, self.w_exp + other.w_exp,
                          self.opw_exp + other.opw_exp, mono)

    def __pow__(self, k: int) -> "GluingUnit":
        k = int(k)
        return GluingUnit(self.coefficient ** k, self.w_exp * k, self.opw_exp * k,
                          tuple(a * k for a in self.monomial))

    def inverse(self) -> "GluingUnit":
        return self ** -1

    def __truediv__(self, other: "GluingUnit") -> "GluingUnit":
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, GluingUnit):
            return NotImplemented
        n = max(len(self.monomial), len(other.monomial))
        return (self.coefficient, self.w_exp, self.opw_exp, _pad(self.monomial, n)) == \
               (other.coefficient, other.w_exp, other.opw_exp, _pad(other.monomial, n))

    def __hash__(self):
        mono = self.monomial
        while mono and mono[-1] == 0:
            mono = mono[:-1]
        return hash((self.coefficient, self.w_exp, self.opw_exp, mono))

    @property
    def is_one(self) -> bool:
        return self == GluingUnit()

    def evaluate(self, u, w) -> complex:
        val = complex(self.coefficient) * complex(w) ** self.w_exp * (1 + complex(w)) ** self.opw_exp
        for uj, a in zip(u, self.monomial):
            val *= complex(uj) ** a
        return val

    def to_json(self) -> dict:
        c = self.coefficient
        return {"coeff": str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}",
                "w_exp": self.w_exp, "opw_exp": self.opw_exp, "monomial": list(self.monomial)}

    @classmethod
    def from_json(cls, data) -> "GluingUnit":
        return cls(Fraction(data["coeff"]), data["w_exp"], data["opw_exp"], tuple(data["monomial"]))

    def __str__(self):
        parts = []
        if self.coefficient != 1:
            parts.append(str(self.coefficient))
        if self.w_exp:
            parts.append("w" if self.w_exp == 1 else f"w^{self.w_exp}")
        if self.opw_exp:
            parts.append("(1+w)" if self.opw_exp == 1 else f"(1+w)^{self.opw_exp}")
        for j, a in enumerate(self.monomial):
            if a:
                parts.append(f"u{j + 1}" if a == 1 else f"u{j + 1}^{a}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class ChartGluing:
    """``images[j]`` expresses source coordinate ``j`` in the target chart; ``w`` is fixed."""

    source: object
    target: object
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        if any(len(g.monomial) != n for g in images):
            raise ValueError("every image needs a monomial over the target coordinates")
        if n and abs(det([list(g.monomial) for g in images])) != 1:
            raise ValueError("monomial part is not invertible over the integers")

    @property
    def rank(self) -> int:
        return len(self.images)

    @property
    def monomial_matrix(self):
        return [list(g.monomial) for g in self.images]

    def inverse(self) -> "ChartGluing":
        inv = integer_inverse(self.monomial_matrix)
        n = self.rank
        images = []
        for i in range(n):
            unit = GluingUnit(1, 0, 0, tuple(inv[i]))
            for j in range(n):
                g = self.images[j]
                unit = unit * GluingUnit(g.coefficient, g.w_exp, g.opw_exp, (0,) * n) ** (-inv[i][j])
            images.append(unit)
        return ChartGluing(self.target, self.source, tuple(images))

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and all(
            g == GluingUnit.coordinate(j, self.rank) for j, g in enumerate(self.images)
        )

    def apply(self, unit: GluingUnit) -> GluingUnit:
        """Rewrite a unit over source coordinates in target coordinates."""
        n = self.rank
        out = GluingUnit(unit.coefficient, unit.w_exp, unit.opw_exp, (0,) * n)
        for g, a in zip(self.images, _pad(unit.monomial, n)):
            out = out * g ** a
        return out

    def to_json(self) -> dict:
        return {"source": _chart_id(self.source), "target": _chart_id(self.target),
                "images": [g.to_json() for g in self.images]}


def _chart_id(c):
    return [_chart_id(x) for x in c] if isinstance(c, tuple) else c


def identity_gluing(chart, n: int) -> ChartGluing:
    return ChartGluing(chart, chart, tuple(GluingUnit.coordinate(j, n) for j in range(n)))


def compose(g1: ChartGluing, g2: ChartGluing) -> ChartGluing:
    """First ``g1`` then ``g2``: source of ``g1`` expressed in the target of ``g2``."""
    if g1.target != g2.source:
        raise ChartMismatch(f"cannot follow a gluing into {g1.target!r} by one out of {g2.source!r}")
    return ChartGluing(g1.source, g2.target, tuple(g2.apply(g) for g in g1.images))


def verify_cocycle(loop) -> bool:
    loop = list(loop)
    if not loop:
        raise NonClosedLoop("empty loop")
    if loop[-1].target != loop[0].source:
        raise NonClosedLoop(f"loop ends at {loop[-1].target!r}, started at {loop[0].source!r}")
    total = loop[0]
    for g in loop[1:]:
        total = compose(total, g)
    return total.is_identity


def wall_crossing_2d(i: int, n_walls: int | None = None, half_plane: str = "+") -> ChartGluing:
    """Crossing wall ``i`` from chamber ``i`` to chamber ``i + 1``: ``u_i = u_{i+1} (1+w)``.

    ``half_plane="-"`` builds the unit as ``w (1 + w^{-1})``; both normalize to
    the same gluing.
    """
    if i < 0 or (n_walls is not None and i >= n_walls):
        raise IndexError(f"wall index {i} out of range")
    if half_plane == "+":
        unit = GluingUnit.from_factors(opw_exp=1, monomial=(1,))
    elif half_plane == "-":
        unit = GluingUnit.from_factors(w_exp=1, opw_inv_exp=1, monomial=(1,))
    else:
        raise ValueError("half_plane must be '+' or '-'")
    return ChartGluing(i, i + 1, (unit,))


def wall_crossing_3d(alpha, beta, curve=None) -> ChartGluing:
    """``u_{alpha,j} = (1+w)^{beta_j - alpha_j} u_{beta,j}``.

    With ``curve`` the labels must be joined by a dual edge.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != len(beta):
        raise ValueError("labels must have equal length")
    if alpha != beta and curve is not None and not curve.is_adjacent(alpha, beta):
        raise NonAdjacentLabels(f"{alpha} and {beta} do not share a wall")
    n = len(alpha)
    images = tuple(GluingUnit(1, 0, b - a, tuple(1 if i == j else 0 for i in range(n)))
                   for j, (a, b) in enumerate(zip(alpha, beta)))
    return ChartGluing(alpha, beta, images)


@dataclass(frozen=True)
class TorusIdentification:
    """``u_{alpha,j} = t_j t_n^{-alpha_j}`` and ``w = t_n - 1`` for a chart labeled ``alpha``."""

    alpha: tuple
    hypersurface: str

    @property
    def rank(self) -> int:
        return len(self.alpha) + 1

    def substitution(self) -> dict:
        n = self.rank
        out = {}
        for j, a in enumerate(self.alpha):
            out[f"u{j + 1}"] = f"t{j + 1}" + ("" if a == 0 else f"*t{n}^{-a}")
        out["w"] = f"t{n} - 1"
        return out

    def pullback(self, unit: GluingUnit):
        """``(coefficient, w_exp, torus exponent)`` of ``unit`` after substitution; ``w`` stays a factor."""
        n = self.rank
        mono = _pad(unit.monomial, n - 1)
        t = [mono[j] for j in range(n - 1)]
        t.append(unit.opw_exp - sum(m * a for m, a in zip(mono, self.alpha)))
        return unit.coefficient, unit.w_exp, tuple(t)

    def torus_monomial(self, m) -> GluingUnit:
        """``t^m`` written in the chart: ``t_j = u_j (1+w)^{alpha_j}``, ``t_n = 1 + w``."""
        m = tuple(m)
        k = m[-1] + sum(a * b for a, b in zip(m[:-1], self.alpha))
        return GluingUnit(1, 0, k, m[:-1])

    def verify(self, beta) -> bool:
        """Both sides of ``wall_crossing_3d(alpha, beta)`` pull back to the same torus function."""
        other = TorusIdentification(tuple(beta), self.hypersurface)
        g = wall_crossing_3d(self.alpha, beta)
        return all(
            self.pullback(GluingUnit.coordinate(j, g.rank)) == other.pullback(img)
            for j, img in enumerate(g.images)
        )


def toric_identification(alpha) -> TorusIdentification:
    alpha = tuple(int(a) for a in alpha)
    return TorusIdentification(alpha, f"t{len(alpha) + 1} = 1")


def toric_identification_2d(i: int) -> TorusIdentification:
    """Chamber ``i`` of the two-dimensional base: ``u_i = t_1 t_2^{-i}``, ``w = t_2 - 1``."""
    return toric_identification((i,))


class CechLineBundle:
    """Transition units on the nerve of a cover.

    ``transitions[(i, j)]`` is stored for one orientation of each edge; the
    other is its inverse.
    """

    def __init__(self, cover, transitions):
        self.cover = list(cover)
        self._t = {}
        for (i, j), unit in transitions.items():
            if i not in self.cover or j not in self.cover:
                raise ValueError(f"transition on unknown charts {(i, j)}")
            if (j, i) in self._t:
                if self._t[(j, i)] != unit.inverse():
                    raise ValueError(f"transitions on {(i, j)} are not mutually inverse")
                continue
            self._t[(i, j)] = unit

    @property
    def edges(self) -> list:
        return list(self._t)

    def adjacent(self, i, j) -> bool:
        return (i, j) in self._t or (j, i) in self._t

    def transition(self, i, j) -> GluingUnit:
        if (i, j) in self._t:
            return self._t[(i, j)]
        if (j, i) in self._t:
            return self._t[(j, i)].inverse()
        raise KeyError(f"charts {i!r} and {j!r} do not overlap")

    def triangles(self) -> list:
        return [t for t in combinations(self.cover, 3)
                if self.adjacent(t[0], t[1]) and self.adjacent(t[1], t[2]) and self.adjacent(t[0], t[2])]

    def cocycle_holds(self) -> bool:
        return all((self.transition(i, j) * self.transition(j, k) * self.transition(k, i)).is_one
                   for i, j, k in self.triangles())

    @property
    def is_trivial(self) -> bool:
        return all(u.is_one for u in self._t.values())

    def tensor(self, other: "CechLineBundle") -> "CechLineBundle":
        if set(self.cover) != set(other.cover) or {frozenset(e) for e in self.edges} != {frozenset(e) for e in other.edges}:
            raise ChartMismatch("bundles live on different covers")
        return CechLineBundle(self.cover, {e: self.transition(*e) * other.transition(*e) for e in self.edges})

    def to_json(self) -> dict:
        return {
            "cover": [_chart_id(c) for c in self.cover],
            "transitions": [{"from": _chart_id(i), "to": _chart_id(j), "unit": u.to_json()}
                            for (i, j), u in self._t.items()],
        }
