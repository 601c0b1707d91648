"""Exact arithmetic in Q(sqrt3, sqrt11) and exact planar predicates.

Every coordinate produced by the graph builders lives in this field, so all
"is this distance 1?" and "do these segments cross?" questions are decided
exactly.  Elements are stored on the basis {1, sqrt3, sqrt11, sqrt33}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Tuple, Union

Rational = Union[int, Fraction]


class ExactArithmeticError(ArithmeticError):
    """Base class for errors raised by this module."""


class FieldDivisionByZero(ExactArithmeticError, ZeroDivisionError):
    pass


class CollinearOverlap(ExactArithmeticError, ValueError):
    """Two segments overlap along a common line; crossing is undefined."""


def _sign_q3(a: Fraction, b: Fraction) -> int:
    """Exact sign of a + b*sqrt3."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 against 3 b^2
    d = a * a - 3 * b * b
    return sa * ((d > 0) - (d < 0))


class QuadExt:
    """a + b*sqrt3 + c*sqrt11 + d*sqrt33 with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, d: Rational = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)
        self._hash = None

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> "QuadExt":
        obj = cls.__new__(cls)
        obj.a, obj.b, obj.c, obj.d = a, b, c, d
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        return NotImplemented

    def components(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __iter__(self):
        return iter(self.components())

    def __add__(self, other):
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt._raw(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt._raw(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = Fraction(other)
            return QuadExt._raw(self.a * k, self.b * k, self.c * k, self.d * k)
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # sqrt3*sqrt3 = 3, sqrt11*sqrt11 = 11, sqrt33*sqrt33 = 33,
        # sqrt3*sqrt11 = sqrt33, sqrt3*sqrt33 = 3 sqrt11, sqrt11*sqrt33 = 11 sqrt3
        a = a1 * a2 + 3 * b1 * b2 + 11 * c1 * c2 + 33 * d1 * d2
        b = a1 * b2 + b1 * a2 + 11 * (c1 * d2 + d1 * c2)
        c = a1 * c2 + c1 * a2 + 3 * (b1 * d2 + d1 * b2)
        d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2
        return QuadExt._raw(a, b, c, d)

    __rmul__ = __mul__

    def conj3(self) -> "QuadExt":
        """Image under sqrt3 -> -sqrt3."""
        return QuadExt._raw(self.a, -self.b, self.c, -self.d)

    def conj11(self) -> "QuadExt":
        """Image under sqrt11 -> -sqrt11."""
        return QuadExt._raw(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise FieldDivisionByZero("division by zero in Q(sqrt3, sqrt11)")
        # x * conj11(x) lies in Q(sqrt3); then rationalise sqrt3.
        c11 = self.conj11()
        n1 = self * c11
        c3 = n1.conj3()
        n2 = n1 * c3
        assert n2.b == 0 and n2.c == 0 and n2.d == 0
        return (c11 * c3) * (1 / n2.a)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise FieldDivisionByZero("division by zero in Q(sqrt3, sqrt11)")
            k = 1 / Fraction(other)
            return self * k
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = QuadExt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def sign(self) -> int:
        return sign(self)

    def __eq__(self, other):
        o = QuadExt.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.c, self.d))
        return self._hash

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return (float(self.a) + float(self.b) * math.sqrt(3)
                + float(self.c) * math.sqrt(11) + float(self.d) * math.sqrt(33))

    def __repr__(self):
        terms = []
        for coef, name in zip(self.components(), ("", "sqrt3", "sqrt11", "sqrt33")):
            if coef:
                terms.append(f"{coef}" if not name else f"{coef}*{name}")
        return "QuadExt(" + (" + ".join(terms) if terms else "0") + ")"

    def to_json(self) -> list:
        """Eight integers: numerator and denominator of each component."""
        out = []
        for q in self.components():
            out.extend((q.numerator, q.denominator))
        return out

    @classmethod
    def from_json(cls, data: Iterable[int]) -> "QuadExt":
        vals = list(data)
        if len(vals) != 8:
            raise ValueError("QuadExt JSON form needs 8 integers")
        return cls(*(Fraction(vals[i], vals[i + 1]) for i in range(0, 8, 2)))


SQRT3 = QuadExt(0, 1)
SQRT11 = QuadExt(0, 0, 1)
SQRT33 = QuadExt(0, 0, 0, 1)
ZERO = QuadExt(0)
ONE = QuadExt(1)


def sign(x: QuadExt) -> int:
    """Exact sign of x.

    Writes x = p + q*sqrt11 with p, q in Q(sqrt3).  When p and q have opposite
    signs the answer is sign(p) * sign(p^2 - 11 q^2), and p^2 - 11 q^2 is again
    in Q(sqrt3), whose sign is settled by one more squaring.
    """
    sp = _sign_q3(x.a, x.b)
    sq = _sign_q3(x.c, x.d)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # p^2 - 11 q^2 with p = a + b r3, q = c + d r3
    a, b, c, d = x.a, x.b, x.c, x.d
    ra = a * a + 3 * b * b - 11 * (c * c + 3 * d * d)
    rb = 2 * a * b - 22 * c * d
    return sp * _sign_q3(ra, rb)


@dataclass(frozen=True)
class Point:
    x: QuadExt
    y: QuadExt

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k) -> "Point":
        return Point(self.x * k, self.y * k)

    def key(self) -> tuple:
        return self.x.components() + self.y.components()

    def approx(self) -> Tuple[float, float]:
        return (float(self.x), float(self.y))

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Point":
        return cls(QuadExt.from_json(data["x"]), QuadExt.from_json(data["y"]))


def point(x, y) -> Point:
    return Point(QuadExt.coerce(x) if not isinstance(x, QuadExt) else x,
                 QuadExt.coerce(y) if not isinstance(y, QuadExt) else y)


HALF = Fraction(1, 2)


def lattice_point(i: int, j: int) -> Point:
    """Triangular-lattice point i*(1, 0) + j*(1/2, sqrt3/2)."""
    return Point(QuadExt(i + HALF * j), QuadExt(0, HALF * j))


class Orientation(Enum):
    CLOCKWISE = "cw"
    COUNTERCLOCKWISE = "ccw"


# Rotation angle theta with cos = 5/6, sin = sqrt11/6.
COS_THETA = QuadExt(Fraction(5, 6))
SIN_THETA = QuadExt(0, 0, Fraction(1, 6))


@dataclass(frozen=True)
class RotationSpec:
    center: Point
    orientation: Orientation = Orientation.CLOCKWISE

    @property
    def cos(self) -> QuadExt:
        return COS_THETA

    @property
    def sin(self) -> QuadExt:
        return SIN_THETA if self.orientation is Orientation.COUNTERCLOCKWISE else -SIN_THETA


def rotate(p: Point, spec: RotationSpec) -> Point:
    """Rotate p about spec.center by theta = arccos(5/6)."""
    c, s = spec.cos, spec.sin
    dx = p.x - spec.center.x
    dy = p.y - spec.center.y
    return Point(spec.center.x + c * dx - s * dy, spec.center.y + s * dx + c * dy)


def rotate_by(p: Point, center: Point, cos: QuadExt, sin: QuadExt) -> Point:
    dx = p.x - center.x
    dy = p.y - center.y
    return Point(center.x + cos * dx - sin * dy, center.y + sin * dx + cos * dy)


def dist2(p: Point, q: Point) -> QuadExt:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p)."""
    return sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def _between(p: Point, q: Point, r: Point) -> bool:
    """For collinear p, q, r: is r strictly inside segment pq."""
    return (sign(r.x - p.x) * sign(r.x - q.x) < 0) or (
        p.x == q.x and sign(r.y - p.y) * sign(r.y - q.y) < 0)


def segments_cross(s1: Tuple[Point, Point], s2: Tuple[Point, Point]) -> bool:
    """True iff the open segments meet in exactly one interior point.

    Touching at a shared endpoint is not a crossing.  A collinear overlap
    raises CollinearOverlap.
    """
    p1, p2 = s1
    q1, q2 = s2
    if p1 == p2 or q1 == q2:
        raise ValueError("degenerate segment")
    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 == 0 and o2 == 0:
        # collinear supports
        if _between(p1, p2, q1) or _between(p1, p2, q2) or _between(q1, q2, p1) \
                or _between(q1, q2, p2) or {p1, p2} == {q1, q2}:
            raise CollinearOverlap(f"collinear overlap between {s1} and {s2}")
        return False
    return o1 * o2 < 0 and o3 * o4 < 0
