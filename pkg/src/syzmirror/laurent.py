"""Exact Laurent polynomials, their Newton polytopes and tropicalizations.

Coefficients are exact complex rationals (a pair of :class:`fractions.Fraction`).
Exponents are integer tuples of a fixed dimension ``d``.

>>> f = parse_laurent("t + z1 + z2 + z1^-1*z2^-1", 2, params={"t": 1})
>>> sorted(f.terms)
[(-1, -1), (0, 0), (0, 1), (1, 0)]
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .exceptions import DimensionMismatch, MissingLiftingError, ParseError

__all__ = [
    "Coefficient",
    "LaurentPolynomial",
    "TropicalFunction",
    "parse_laurent",
    "newton_polytope",
    "tropicalize",
    "as_lifting",
]


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(str(value)) if isinstance(value, str) else Fraction(value)


@dataclass(frozen=True)
class Coefficient:
    """Exact complex rational ``re + i*im``."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _fraction(self.re))
        object.__setattr__(self, "im", _fraction(self.im))

    @classmethod
    def of(cls, value) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(_fraction(value))

    def __add__(self, other):
        other = Coefficient.of(other)
        return Coefficient(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Coefficient.of(other))

    def __mul__(self, other):
        o = Coefficient.of(other)
        return Coefficient(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "Coefficient":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("zero coefficient has no inverse")
        return Coefficient(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Coefficient.of(other).inverse()

    def __pow__(self, k: int):
        result = Coefficient(1)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def modulus(self) -> float:
        return abs(complex(self))

    def __str__(self):
        if not self.im:
            return _fmt_fraction(self.re)
        if not self.re:
            return f"{_fmt_fraction(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"({_fmt_fraction(self.re)}{sign}{_fmt_fraction(abs(self.im))}i)"


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# dict-level helpers; the empty dict is the zero polynomial
def _add(p, q):
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, Coefficient(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, Coefficient(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _scale(p, c):
    return {e: v * c for e, v in p.items()} if c else {}


class LaurentPolynomial:
    """A nonzero Laurent polynomial in ``z1..zd`` with exact coefficients."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        for exp, coeff in terms.items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != dim:
                raise DimensionMismatch(f"exponent {exp} does not have dimension {dim}")
            c = Coefficient.of(coeff)
            if c:
                clean[exp] = clean.get(exp, Coefficient(0)) + c
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            raise ValueError("the zero polynomial is not allowed")
        self.dim = dim
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coefficient})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def exponents(self) -> list:
        return list(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, tuple(self._terms.items())))

    def __repr__(self):
        return f"LaurentPolynomial({self.dim}, {self.to_string()!r})"

    def _check(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.dim != self.dim:
                raise DimensionMismatch("polynomials have different dimensions")
            return other._terms
        return {(0,) * self.dim: Coefficient.of(other)}

    def __add__(self, other):
        return LaurentPolynomial(self.dim, _add(self._terms, self._check(other)))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPolynomial) else -Coefficient.of(other))

    def __mul__(self, other):
        return LaurentPolynomial(self.dim, _mul(self._terms, self._check(other)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self) != 1:
                raise ValueError("only monomials have negative powers")
            (e, c), = self._terms.items()
            return LaurentPolynomial(self.dim, {tuple(k * a for a in e): c ** k})
        result = {(0,) * self.dim: Coefficient(1)}
        for _ in range(k):
            result = _mul(result, self._terms)
        return LaurentPolynomial(self.dim, result)

    def exponent_array(self) -> np.ndarray:
        return np.array(self.exponents, dtype=np.int64).reshape(len(self), self.dim)

    def coefficient_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self._terms.values()], dtype=complex)

    def __call__(self, *z):
        """Numeric evaluation; ``z`` are complex scalars or broadcastable arrays."""
        if len(z) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} arguments, got {len(z)}")
        z = [np.asarray(v, dtype=complex) for v in z]
        total = 0
        for exp, c in self._terms.items():
            term = complex(c)
            for zj, a in zip(z, exp):
                if a:
                    term = term * zj ** a
            total = total + term
        return total

    def derivative(self, j: int) -> "LaurentPolynomial | None":
        """Partial derivative in ``z_{j+1}``; ``None`` if it vanishes."""
        out = {}
        for exp, c in self._terms.items():
            if exp[j]:
                e = list(exp)
                e[j] -= 1
                out[tuple(e)] = c * exp[j]
        return LaurentPolynomial(self.dim, out) if out else None

    def to_string(self) -> str:
        names = [f"z{k + 1}" for k in range(self.dim)]
        pieces = []
        for exp, c in self._terms.items():
            mono = "*".join(
                name if a == 1 else f"{name}^{a}" for name, a in zip(names, exp) if a
            )
            negative = not c.im and c.re < 0
            shown = -c if negative else c
            if mono:
                body = mono if shown == Coefficient(1) else f"{shown}*{mono}"
            else:
                body = str(shown)
            pieces.append(("-" if negative else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {"exp": list(e), "re": _fmt_fraction(c.re), "im": _fmt_fraction(c.im)}
                for e, c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPolynomial":
        dim = int(data["dim"])
        terms = {}
        for t in data["terms"]:
            exp = tuple(t["exp"])
            c = Coefficient(_fraction(t.get("re", 0)), _fraction(t.get("im", 0)))
            terms = _add(terms, {exp: c}) if c else terms
            if len(exp) != dim:
                raise DimensionMismatch(f"exponent {list(exp)} does not have dimension {dim}")
        return cls(dim, terms)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("num") is not None:
            start = m.start("num")
            kind = "imag" if m.group("imag") else "num"
            tokens.append((kind, m.group("num"), start))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), start))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, dim, params):
        self.text = text
        self.dim = dim
        self.params = params
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}", pos)

    def const(self, c):
        return {(0,) * self.dim: c} if c else {}

    def parse(self):
        poly = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", pos)
        return poly

    def expr(self):
        sign = 1
        kind, v, pos = self.peek()
        if v in ("+", "-"):
            self.take()
            sign = -1 if v == "-" else 1
        total = _scale(self.term(), Coefficient(sign))
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, v, _ = self.take()
            t = self.term()
            total = _add(total, t if v == "+" else _scale(t, Coefficient(-1)))
        return total

    def starts_factor(self, tok):
        kind, v, _ = tok
        return kind in ("num", "imag", "name") or v == "("

    def term(self):
        result = self.power()
        while True:
            tok = self.peek()
            if tok[1] == "*" and tok[0] == "op":
                self.take()
                result = _mul(result, self.power())
            elif tok[1] == "/" and tok[0] == "op":
                self.take()
                pos = self.peek()[2]
                divisor = self.power()
                result = _mul(result, self.invert(divisor, pos))
            elif self.starts_factor(tok):
                result = _mul(result, self.power())
            else:
                return result

    def invert(self, poly, pos):
        if len(poly) != 1:
            raise ParseError("division is only defined by a single nonzero term", pos)
        (e, c), = poly.items()
        return {tuple(-a for a in e): c.inverse()}

    def power(self):
        base_pos = self.peek()[2]
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            sign = 1
            if self.peek()[1] in ("+", "-"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, v, pos = self.take()
            if kind != "num" or not v.isdigit():
                raise ParseError("exponent must be an integer", pos)
            k = sign * int(v)
            if k < 0:
                base = self.invert(base, base_pos)
                k = -k
            result = self.const(Coefficient(1))
            for _ in range(k):
                result = _mul(result, base)
            return result
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return self.const(Coefficient(Fraction(v)))
        if kind == "imag":
            return self.const(Coefficient(0, Fraction(v)))
        if kind == "name":
            return self.name(v, pos)
        if v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError("expected a number, variable or '('" if kind != "end" else "unexpected end of input", pos)

    def name(self, v, pos):
        if v == "i":
            return self.const(Coefficient(0, 1))
        m = re.fullmatch(r"z(\d+)", v)
        if m or (v == "z" and self.dim == 1):
            k = int(m.group(1)) if m else 1
            if not 1 <= k <= self.dim:
                raise DimensionMismatch(f"variable {v} at position {pos} exceeds dimension {self.dim}")
            exp = [0] * self.dim
            exp[k - 1] = 1
            return {tuple(exp): Coefficient(1)}
        if v in self.params:
            return self.const(Coefficient.of(self.params[v]))
        if v == "e":
            return self.const(Coefficient.of(math.e))
        raise ParseError(f"unknown identifier {v!r}", pos)


def parse_laurent(text: str, dimension: int, params: Mapping | None = None) -> LaurentPolynomial:
    """Parse ``text`` into a :class:`LaurentPolynomial` in ``dimension`` variables.

    Sums, differences, products (explicit ``*`` or juxtaposition), integer
    powers (``^`` or ``**``), division by a single term and parentheses are
    accepted. Variables are ``z1..zd`` (plain ``z`` when ``d == 1``); ``i`` is
    the imaginary unit. Other identifiers are looked up in ``params`` and
    substituted exactly (floats via their exact binary value).
    """
    poly = _Parser(text, dimension, dict(params or {})).parse()
    if not poly:
        raise ParseError("polynomial is identically zero", 0)
    return LaurentPolynomial(dimension, poly)


# ---------------------------------------------------------------- polytope

def newton_polytope(f: LaurentPolynomial):
    """Convex hull of the exponents of ``f`` as a :class:`LatticePolytope`."""
    from .subdivision import LatticePolytope

    return LatticePolytope.from_points(f.exponents)


# ---------------------------------------------------------------- tropical

def _parse_point_key(key, dim):
    if isinstance(key, str):
        nums = re.findall(r"-?\d+", key)
        key = tuple(int(n) for n in nums)
    key = tuple(int(a) for a in (key if isinstance(key, (tuple, list)) else (key,)))
    if len(key) != dim:
        raise DimensionMismatch(f"lifting point {key} does not have dimension {dim}")
    return key


def as_lifting(h, support, dim: int | None = None) -> dict:
    """Normalize a lifting to ``{point: Fraction}``.

    ``h`` may be ``None`` (zero on ``support``), a callable evaluated on
    ``support``, or a mapping whose keys are tuples, ints (``d == 1``) or
    strings such as ``"(1,0)"``.
    """
    support = [tuple(p) for p in support]
    if dim is None:
        dim = len(support[0])
    if h is None:
        return {p: Fraction(0) for p in support}
    if callable(h) and not isinstance(h, Mapping):
        return {p: _fraction(h(p if dim > 1 else p[0])) for p in support}
    return {_parse_point_key(k, dim): _fraction(v) for k, v in h.items()}


def log_lifting(f: LaurentPolynomial) -> dict:
    """``h(a) = -log|c_a|`` rounded to a rational with denominator at most 10**6."""
    return {a: -Fraction(float(np.log(c.modulus()))).limit_denominator(10 ** 6) for a, c in f.terms.items()}


class TropicalFunction:
    """Max-plus tropical polynomial ``x -> max_a (<a, x> - h(a))``."""

    convention = "max-plus"

    def __init__(self, heights: Mapping):
        self.heights = {tuple(a): _fraction(v) for a, v in heights.items()}
        if not self.heights:
            raise ValueError("tropical function needs at least one term")

    @property
    def dim(self):
        return len(next(iter(self.heights)))

    def values(self, x):
        return {a: sum(ai * xi for ai, xi in zip(a, x)) - h for a, h in self.heights.items()}

    def __call__(self, x):
        return max(self.values(x).values())

    def dominant_terms(self, x) -> list:
        vals = self.values(x)
        top = max(vals.values())
        return sorted(a for a, v in vals.items() if v == top)

    def on_corner_locus(self, x) -> bool:
        return len(self.dominant_terms(x)) >= 2

    def shifted(self, c) -> "TropicalFunction":
        c = _fraction(c)
        return TropicalFunction({a: h + c for a, h in self.heights.items()})

    def __repr__(self):
        parts = []
        for a, h in self.heights.items():
            bits = []
            for k, ai in enumerate(a):
                if ai:
                    mag = "" if abs(ai) == 1 else f"{abs(ai)}*"
                    bits.append(("-" if ai < 0 else "+", f"{mag}x{k + 1}"))
            if h or not bits:
                bits.append(("-" if h > 0 else "+", _fmt_fraction(abs(h))))
            text = ("-" if bits[0][0] == "-" else "") + bits[0][1]
            text += "".join(f" {sgn} {body}" for sgn, body in bits[1:])
            parts.append(text)
        return f"max({', '.join(parts)})"


def tropicalize(f: LaurentPolynomial, h: Mapping | Callable | None = None) -> TropicalFunction:
    """Max-plus tropicalization of ``f`` with lifting ``h`` (default ``h = 0``).

    The term set is the support of ``f`` together with any further points
    where ``h`` is specified; those must be lattice points of the Newton
    polytope of ``f``.
    """
    support = f.exponents
    if h is None or callable(h) and not isinstance(h, Mapping):
        heights = as_lifting(h, support, f.dim)
    else:
        heights = as_lifting(h, support, f.dim)
        missing = [a for a in support if a not in heights]
        if missing:
            raise MissingLiftingError(f"lifting undefined on exponents {missing}")
        extra = set(heights) - set(support)
        if extra:
            allowed = set(newton_polytope(f).lattice_points)
            bad = sorted(extra - allowed)
            if bad:
                raise ValueError(f"lifting points {bad} lie outside the Newton polytope")
    return TropicalFunction(heights)
