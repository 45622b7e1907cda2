"""Homogeneous forms in X, Y, Z and binary forms in s, t.

A :class:`HomForm` is stored with primitive integer coefficients whose
leading term (graded lex, X > Y > Z) is positive, so equal curves compare
equal. Raw, un-normalized trivariate polynomials (partial derivatives,
substitutions) are plain ``{(i, j, k): coef}`` dicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from rigidplane.core.projective import ProjLine, ProjPoint, line_basis, normalize
from rigidplane.core.upoly import UniPoly, poly_gcd, rational_roots, squarefree_decomposition
from rigidplane.errors import ComponentContained

Exponent = tuple[int, int, int]
RawPoly = dict[Exponent, int]


def monomials(degree: int) -> list[Exponent]:
    """Exponent triples of the given degree in graded lex order, X > Y > Z."""
    return [(i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1)]


def _grlex_key(e: Exponent) -> tuple[int, int]:
    return (-e[0], -e[1])


@dataclass(frozen=True)
class HomForm:
    degree: int
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_terms(cls, degree: int, coeffs: Mapping[Exponent, int | Fraction]) -> "HomForm":
        """Normalize arbitrary rational coefficients into a HomForm."""
        if degree < 1:
            raise ValueError("forms must have positive degree")
        items = [(tuple(e), Fraction(c)) for e, c in coeffs.items() if c != 0]
        if not items:
            raise ValueError("the zero form defines no curve")
        for e, _ in items:
            if len(e) != 3 or min(e) < 0 or sum(e) != degree:
                raise ValueError(f"monomial {e} does not have degree {degree}")
        den = math.lcm(*(c.denominator for _, c in items))
        ints = {e: int(c * den) for e, c in items}
        g = math.gcd(*ints.values())
        order = sorted(ints, key=_grlex_key)
        if ints[order[0]] < 0:
            g = -g
        return cls(degree, tuple((e, ints[e] // g) for e in order))

    @classmethod
    def from_vector(cls, degree: int, vec: Sequence[int | Fraction]) -> "HomForm":
        """Coefficients listed in the order of :func:`monomials`."""
        return cls.from_terms(degree, dict(zip(monomials(degree), vec)))

    @classmethod
    def from_line(cls, l: ProjLine) -> "HomForm":
        return cls.from_terms(1, {(1, 0, 0): l[0], (0, 1, 0): l[1], (0, 0, 1): l[2]})

    @classmethod
    def from_raw(cls, raw: Mapping[Exponent, int | Fraction]) -> "HomForm":
        nz = [e for e, c in raw.items() if c]
        if not nz:
            raise ValueError("the zero form defines no curve")
        return cls.from_terms(sum(nz[0]), raw)

    def is_normalized(self) -> bool:
        try:
            return HomForm.from_terms(self.degree, dict(self.terms)) == self
        except ValueError:
            return False

    def as_dict(self) -> RawPoly:
        return dict(self.terms)

    def as_line(self) -> ProjLine:
        if self.degree != 1:
            raise ValueError("not a line")
        d = self.as_dict()
        return ProjLine(*normalize((d.get((1, 0, 0), 0), d.get((0, 1, 0), 0), d.get((0, 0, 1), 0))))

    def coefficient_vector(self) -> list[int]:
        d = self.as_dict()
        return [d.get(e, 0) for e in monomials(self.degree)]

    def evaluate(self, p: Sequence[int | Fraction]) -> int | Fraction:
        return raw_evaluate(self.terms, p)

    def contains(self, p: ProjPoint) -> bool:
        return self.evaluate(p) == 0

    def partials(self) -> tuple[RawPoly, RawPoly, RawPoly]:
        return raw_partials(self.as_dict())

    def __str__(self) -> str:
        return format_raw(self.as_dict())


# -- raw trivariate polynomials ------------------------------------------------


def raw_evaluate(terms, p) -> int | Fraction:
    items = terms.items() if isinstance(terms, Mapping) else terms
    x, y, z = p
    return sum(c * x**i * y**j * z**k for (i, j, k), c in items)


def raw_partials(poly: Mapping[Exponent, int]) -> tuple[RawPoly, RawPoly, RawPoly]:
    out: tuple[RawPoly, RawPoly, RawPoly] = ({}, {}, {})
    for (i, j, k), c in poly.items():
        if i:
            out[0][(i - 1, j, k)] = out[0].get((i - 1, j, k), 0) + i * c
        if j:
            out[1][(i, j - 1, k)] = out[1].get((i, j - 1, k), 0) + j * c
        if k:
            out[2][(i, j, k - 1)] = out[2].get((i, j, k - 1), 0) + k * c
    return tuple({e: c for e, c in d.items() if c} for d in out)


def raw_mul(a: Mapping[Exponent, int], b: Mapping[Exponent, int]) -> RawPoly:
    out: RawPoly = {}
    for (i, j, k), c in a.items():
        for (u, v, w), d in b.items():
            key = (i + u, j + v, k + w)
            out[key] = out.get(key, 0) + c * d
    return {e: c for e, c in out.items() if c}


def raw_substitute(poly: Mapping[Exponent, int], matrix: Sequence[Sequence[int]]) -> RawPoly:
    """``poly(M @ (X, Y, Z))`` for a 3x3 integer matrix ``M``."""
    lin = [{(1, 0, 0): r[0], (0, 1, 0): r[1], (0, 0, 1): r[2]} for r in matrix]
    lin = [{e: c for e, c in l.items() if c} for l in lin]
    deg = max((sum(e) for e in poly), default=0)
    powers = [[{(0, 0, 0): 1}] for _ in range(3)]
    for v in range(3):
        for _ in range(deg):
            powers[v].append(raw_mul(powers[v][-1], lin[v]))
    out: RawPoly = {}
    for (i, j, k), c in poly.items():
        term = raw_mul(raw_mul(powers[0][i], powers[1][j]), powers[2][k])
        for e, d in term.items():
            out[e] = out.get(e, 0) + c * d
    return {e: c for e, c in out.items() if c}


def format_raw(poly: Mapping[Exponent, int | Fraction]) -> str:
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, key=lambda e: (-sum(e), -e[0], -e[1])):
        c = poly[e]
        if c == 0:
            continue
        mono = "".join(
            v if n == 1 else f"{v}^{n}" for v, n in zip("XYZ", e) if n
        )
        mag = abs(c)
        body = str(mag) if (mag != 1 or not mono) else ""
        parts.append(("-" if c < 0 else "+", body + mono))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- binary forms ---------------------------------------------------------------


@dataclass(frozen=True)
class BinaryForm:
    """``sum(coeffs[i] * s**(d - i) * t**i)``, integer coefficients, not normalized."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def t_multiplicity(self) -> int:
        """Multiplicity of the root ``(s:t) = (1:0)``, i.e. the power of ``t`` dividing the form."""
        m = 0
        for c in self.coeffs:
            if c:
                return m
            m += 1
        raise ValueError("zero binary form")

    def dehomogenize(self) -> UniPoly:
        """The polynomial ``b(s, 1)`` in ``s``."""
        return UniPoly(reversed(self.coeffs))

    @classmethod
    def homogenize(cls, f: UniPoly, degree: int) -> "BinaryForm":
        ints = f.primitive_integer() if not f.is_zero() else []
        if len(ints) - 1 > degree:
            raise ValueError("degree too small to homogenize")
        low = list(ints) + [0] * (degree + 1 - len(ints))
        return cls(tuple(reversed(low)))

    def primitive(self) -> "BinaryForm":
        """Coprime coefficients with the first nonzero coefficient positive."""
        g = math.gcd(*self.coeffs)
        if g == 0:
            return self
        if next(c for c in self.coeffs if c) < 0:
            g = -g
        return BinaryForm(tuple(c // g for c in self.coeffs))

    def __call__(self, s, t):
        d = self.degree
        return sum(c * s ** (d - i) * t**i for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        d = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            ps, pt = d - i, i
            mono = ("s" if ps == 1 else f"s^{ps}" if ps else "") + ("t" if pt == 1 else f"t^{pt}" if pt else "")
            mag = abs(c)
            body = str(mag) if (mag != 1 or not mono) else ""
            parts.append(("-" if c < 0 else "+", body + mono))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _bin_mul(a: list[int], b: list[int]) -> list[int]:
    # coefficient lists indexed by power of t; both of full length deg+1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def restrict_to_line(form: HomForm | Mapping[Exponent, int], l: ProjLine) -> BinaryForm:
    """Substitute the canonical parametrization ``s*A + t*B`` of ``l`` into a form.

    The result has the full degree of the form; its roots ``(s:t)`` are the
    intersection points, with multiplicity.
    """
    poly = form.as_dict() if isinstance(form, HomForm) else dict(form)
    degree = form.degree if isinstance(form, HomForm) else max(sum(e) for e in poly)
    a, b = line_basis(l)
    # the linear form X (resp. Y, Z) along the line: a_v * s + b_v * t
    lin = [[a[v], b[v]] for v in range(3)]
    powers = []
    for v in range(3):
        pw = [[1]]
        for _ in range(degree):
            pw.append(_bin_mul(pw[-1], lin[v]))
        powers.append(pw)
    acc = [0] * (degree + 1)
    for (i, j, k), c in poly.items():
        term = _bin_mul(_bin_mul(powers[0][i], powers[1][j]), powers[2][k])
        for idx, val in enumerate(term):
            acc[idx] += c * val
    if not any(acc):
        raise ComponentContained(f"{format_raw(poly)} vanishes on {l}")
    return BinaryForm(tuple(acc))


def squarefree_factors(b: BinaryForm) -> list[tuple[int, BinaryForm]]:
    """Squarefree decomposition of a binary form over Q as ``(multiplicity, factor)``.

    Factors are primitive; the root at ``(1:0)`` appears as the factor ``t``.
    Equal multiplicities are merged into one factor.
    """
    if b.is_zero():
        raise ValueError("zero binary form")
    m = b.t_multiplicity()
    parts: dict[int, UniPoly] = {}
    for k, a in squarefree_decomposition(b.dehomogenize()):
        parts[k] = a
    out: dict[int, BinaryForm] = {}
    for k, a in parts.items():
        out[k] = BinaryForm.homogenize(a, a.degree)
    if m:
        t = BinaryForm((0, 1))
        out[m] = _bin_form_mul(out[m], t) if m in out else t
    return sorted(out.items(), key=lambda kv: -kv[0])


def _bin_form_mul(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    return BinaryForm(tuple(_bin_mul(list(a.coeffs), list(b.coeffs)))).primitive()


def multiplicity_profile(b: BinaryForm) -> list[tuple[int, int]]:
    """``[(multiplicity, degree of the squarefree factor)]``, highest multiplicity first.

    >>> multiplicity_profile(BinaryForm((0, 1, 0, 0)))  # s^2 t
    [(2, 1), (1, 1)]
    """
    return [(k, f.degree) for k, f in squarefree_factors(b)]


def total_multiplicity(b: BinaryForm) -> int:
    if b.degree <= 1 and not b.is_zero():
        return b.degree
    return sum(k * d for k, d in multiplicity_profile(b))


def binary_rational_roots(b: BinaryForm) -> list[tuple[int, int]]:
    """Distinct rational roots ``(s, t)`` as coprime integer pairs, sign-canonical."""
    out = []
    if b.t_multiplicity():
        out.append((1, 0))
    for r in rational_roots(b.dehomogenize()):
        out.append((r.numerator, r.denominator))
    return out


def nonrational_part(b: BinaryForm) -> BinaryForm | None:
    """Squarefree part of ``b`` with all rational linear factors removed, or None."""
    f = b.dehomogenize()
    # the (1:0) root is rational; it only lowers the degree of f
    for r in rational_roots(f):
        while f(r) == 0:
            f = f // UniPoly([-r, 1])
    if f.degree <= 0:
        return None
    g = poly_gcd(f, f.derivative())
    f = f // g
    return BinaryForm.homogenize(f, f.degree).primitive()


def binary_divides(a: BinaryForm, b: BinaryForm) -> bool:
    """Whether ``a`` divides ``b`` in Q[s, t]."""
    if a.is_zero():
        return b.is_zero()
    if b.is_zero():
        return True
    if a.t_multiplicity() > b.t_multiplicity():
        return False
    return (b.dehomogenize() % a.dehomogenize()).is_zero()


def points_from_roots(l: ProjLine, roots: Iterable[tuple[int, int]]) -> list[ProjPoint]:
    a, b = line_basis(l)
    return [ProjPoint(*normalize([s * x + t * y for x, y in zip(a, b)])) for s, t in roots]


def rational_points_on_line(form: HomForm, l: ProjLine) -> list[ProjPoint]:
    """Rational intersection points of a curve with a line it does not contain."""
    return points_from_roots(l, binary_rational_roots(restrict_to_line(form, l)))
