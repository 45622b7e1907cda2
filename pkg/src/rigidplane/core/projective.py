"""Points and lines of the projective plane over Q, as primitive integer triples.

Points and lines share one normal form: divide by the gcd of the entries and
make the first nonzero entry positive. The normal form is unique per ray, so
triples can be hashed and compared directly. Join and meet are both the
cross product.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from rigidplane.errors import EqualLines, EqualPoints, ZeroVector

Number = Union[int, Fraction]


def normalize(v: Iterable[Number]) -> tuple[int, int, int]:
    """Return the primitive, sign-canonical integer representative of ``v``.

    Rational entries are accepted and cleared first.

    >>> normalize((2, 4, 6))
    (1, 2, 3)
    >>> normalize((0, -3, 3))
    (0, 1, -1)
    """
    vals = [Fraction(x) for x in v]
    if len(vals) != 3:
        raise ValueError(f"expected a triple, got {len(vals)} entries")
    den = math.lcm(*(x.denominator for x in vals))
    x, y, z = (int(t * den) for t in vals)
    g = math.gcd(x, y, z)
    if g == 0:
        raise ZeroVector("the zero vector has no projective class")
    if (x or y or z) < 0:
        g = -g
    return (x // g, y // g, z // g)


def is_normalized(v: tuple[int, int, int]) -> bool:
    x, y, z = v
    return math.gcd(x, y, z) == 1 and (x or y or z) > 0


def _cross_normalized(a, b) -> tuple[int, int, int] | None:
    x = a[1] * b[2] - a[2] * b[1]
    y = a[2] * b[0] - a[0] * b[2]
    z = a[0] * b[1] - a[1] * b[0]
    g = math.gcd(x, y, z)
    if g == 0:
        return None
    if (x or y or z) < 0:
        g = -g
    return (x // g, y // g, z // g)


class ProjPoint(NamedTuple):
    """A point ``(x:y:z)``. Build through :meth:`of` unless already normalized."""

    x: int
    y: int
    z: int

    @classmethod
    def of(cls, x: Number, y: Number, z: Number) -> "ProjPoint":
        return cls(*normalize((x, y, z)))

    @property
    def height(self) -> int:
        return max(abs(self.x), abs(self.y), abs(self.z))

    @property
    def at_infinity(self) -> bool:
        return self.z == 0

    def affine(self) -> tuple[Fraction, Fraction]:
        """Chart coordinates ``(x/z, y/z)``; only for finite points."""
        if self.z == 0:
            raise ValueError(f"{self} lies on Z=0")
        return Fraction(self.x, self.z), Fraction(self.y, self.z)

    def __str__(self) -> str:
        return f"({self.x}:{self.y}:{self.z})"


class ProjLine(NamedTuple):
    """The line ``aX + bY + cZ = 0``."""

    a: int
    b: int
    c: int

    @classmethod
    def of(cls, a: Number, b: Number, c: Number) -> "ProjLine":
        return cls(*normalize((a, b, c)))

    def __str__(self) -> str:
        terms = []
        for coef, var in zip(self, "XYZ"):
            if coef == 0:
                continue
            mag = "" if abs(coef) == 1 else str(abs(coef))
            sign = "-" if coef < 0 else "+"
            terms.append((sign, f"{mag}{var}"))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return f"{out} = 0"


X_AXIS_LINE = ProjLine(0, 1, 0)  # Y = 0, carries the points (u:0:1)
Y_AXIS_LINE = ProjLine(1, 0, 0)  # X = 0, carries the points (0:v:1)
LINE_AT_INFINITY = ProjLine(0, 0, 1)


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The line through two distinct points."""
    r = _cross_normalized(p, q)
    if r is None:
        raise EqualPoints(f"cannot join {p} with itself")
    return ProjLine(*r)


def meet(l: ProjLine, m: ProjLine) -> ProjPoint:
    """The intersection point of two distinct lines."""
    r = _cross_normalized(l, m)
    if r is None:
        raise EqualLines(f"cannot meet {l} with itself")
    return ProjPoint(*r)


def incident(p: ProjPoint, l: ProjLine) -> bool:
    return p[0] * l[0] + p[1] * l[1] + p[2] * l[2] == 0


def det3(a, b, c) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    return det3(p, q, r) == 0


def line_basis(l: ProjLine) -> tuple[ProjPoint, ProjPoint]:
    """Two canonical points spanning ``l``, used to parametrize it as ``s*A + t*B``.

    The pivot is the first nonzero coefficient; each of the other two columns
    gives one kernel generator of the 1x3 system, normalized. For ``Y = 0``
    this is ``A = (1:0:0)``, ``B = (0:0:1)``, i.e. the parametrization
    ``(s:0:t)``.
    """
    coeffs = tuple(l)
    pivot = next(i for i, c in enumerate(coeffs) if c != 0)
    gens = []
    for free in range(3):
        if free == pivot:
            continue
        v = [0, 0, 0]
        v[free] = coeffs[pivot]
        v[pivot] = -coeffs[free]
        gens.append(ProjPoint(*normalize(v)))
    return gens[0], gens[1]


def point_on_line(l: ProjLine, s: Number, t: Number) -> ProjPoint:
    """The point with parameter ``(s:t)`` in the canonical parametrization of ``l``."""
    a, b = line_basis(l)
    return ProjPoint.of(*(s * ai + t * bi for ai, bi in zip(a, b)))
