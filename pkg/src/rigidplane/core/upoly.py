"""Univariate polynomials over Q, squarefree decomposition and real root isolation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from rigidplane.errors import NoSignChange, NotSquarefree


class UniPoly:
    """Dense polynomial with :class:`Fraction` coefficients, lowest degree first.

    Instances are immutable and hashable; the zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int | Fraction] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_high(cls, coeffs: Sequence[int | Fraction]) -> "UniPoly":
        """Build from coefficients listed leading term first."""
        return cls(reversed(list(coeffs)))

    @classmethod
    def monomial(cls, k: int, c: int | Fraction = 1) -> "UniPoly":
        return cls([0] * k + [c])

    # -- basic data --------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def high(self) -> list[Fraction]:
        return list(reversed(self.coeffs))

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({str(self)!r})"

    def __str__(self) -> str:
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = "" if mag == 1 else str(mag)
                if body and mag.denominator != 1:
                    body = f"({body})"
                body += var if k == 1 else f"{var}^{k}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic --------------------------------------------------------

    def __call__(self, x: int | Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            f = rem[k + dq] / lc
            quo[k] = f
            if f:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= f * b
        return UniPoly(quo), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def primitive_integer(self) -> list[int]:
        """Coprime integer coefficients (lowest first) with positive leading term."""
        if self.is_zero():
            return []
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return [x // g for x in ints]

    def primitive(self) -> "UniPoly":
        return UniPoly(self.primitive_integer())

    def sign_at(self, x: int | Fraction) -> int:
        v = self(x)
        return (v > 0) - (v < 0)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: UniPoly) -> bool:
    return f.degree <= 0 or poly_gcd(f, f.derivative()).degree == 0


def squarefree_decomposition(f: UniPoly) -> list[tuple[int, UniPoly]]:
    """Yun's algorithm: ``f = lc * prod(a_k ** k)`` with pairwise coprime squarefree ``a_k``.

    Returns the nonconstant factors as ``(k, a_k)`` with ``a_k`` monic.
    """
    if f.degree <= 0:
        return []
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f // a
    c = fp // a
    out = []
    k = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((k, g))
        b = b // g
        c = d // g
        k += 1
    return out


def squarefree_part(f: UniPoly) -> UniPoly:
    if f.degree <= 0:
        return f.monic()
    return (f // poly_gcd(f, f.derivative())).monic()


# -- real roots ---------------------------------------------------------------


@dataclass(frozen=True)
class IntervalQ:
    """Open rational interval ``(lo, hi)``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


def sturm_sequence(f: UniPoly) -> list[UniPoly]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def sign_variations(seq: Sequence[UniPoly], x: int | Fraction) -> int:
    signs = [s for s in (p.sign_at(x) for p in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_real_roots(f: UniPoly, lo: Fraction, hi: Fraction, seq=None) -> int:
    """Number of distinct real roots of squarefree ``f`` in ``(lo, hi]``."""
    seq = seq if seq is not None else sturm_sequence(f)
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def root_bound(f: UniPoly) -> int:
    """An integer ``B`` with every real root strictly inside ``(-B, B)``."""
    lc = abs(f.lc)
    m = max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))
    return math.floor(m) + 2


def _split_point(f: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    # midpoint, or a nearby fraction when the midpoint happens to be a root
    k = 2
    while True:
        for j in range(1, k):
            x = lo + (hi - lo) * Fraction(j, k)
            if f(x) != 0:
                return x
        k += 1


def sturm_isolate(f: UniPoly) -> list[IntervalQ]:
    """Disjoint open intervals with non-root endpoints, one per real root, ascending."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if not is_squarefree(f):
        raise NotSquarefree(f"{f} has repeated roots")
    if f.degree == 0:
        return []
    seq = sturm_sequence(f)
    b = root_bound(f)
    out = []
    stack = [(Fraction(-b), Fraction(b))]
    while stack:
        lo, hi = stack.pop()
        n = count_real_roots(f, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(IntervalQ(lo, hi))
            continue
        mid = _split_point(f, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_root(f: UniPoly, interval: IntervalQ, width: int | Fraction) -> IntervalQ:
    """Bisect ``interval`` until it is at most ``width`` wide.

    ``interval`` must bracket a strict sign change of ``f``. If a bisection
    point is an exact root, a window of the requested width centred on it is
    returned (clipped to the input interval).
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("refinement width must be positive")
    lo, hi = interval.lo, interval.hi
    slo, shi = f.sign_at(lo), f.sign_at(hi)
    if slo * shi >= 0:
        raise NoSignChange(f"{f} has no sign change on {interval}")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = f.sign_at(mid)
        if s == 0:
            return IntervalQ(max(lo, mid - width / 2), min(hi, mid + width / 2))
        if s == slo:
            lo = mid
        else:
            hi = mid
    return IntervalQ(lo, hi)


def rational_roots(f: UniPoly) -> list[Fraction]:
    """All rational roots of ``f``, ascending, without multiplicity.

    A rational root ``a/b`` of a primitive integer polynomial has ``b``
    dividing the leading coefficient ``L``, and two such fractions differ by
    at least ``1/L**2``. Each isolating interval is therefore refined below
    that gap and the single candidate with denominator at most ``|L|`` is
    tested exactly; no integer factoring is needed.
    """
    if f.degree <= 0:
        return []
    g = UniPoly(squarefree_part(f).primitive_integer())
    if g.degree == 1:
        return [-g.coeffs[0] / g.coeffs[1]]
    lead = abs(int(g.lc))
    out = []
    if g(0) == 0:
        out.append(Fraction(0))
        g = g // UniPoly([0, 1])
        if g.degree <= 0:
            return out
    for iv in sturm_isolate(g):
        ref = refine_root(g, iv, Fraction(1, 2 * lead * lead))
        mid = (ref.lo + ref.hi) / 2
        cand = mid.limit_denominator(lead)
        if g(cand) == 0 and ref.lo <= cand <= ref.hi:
            out.append(cand)
    out.sort()
    return out
