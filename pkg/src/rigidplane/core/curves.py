"""Elimination for plane curves: resultants, common points, singular points.

Everything here works by projecting from a rational centre ``c`` that lies
off the curves involved. The resultant then becomes a binary form whose
roots are the directions of the lines through ``c`` carrying common points.
Rational directions are followed up exactly by restricting to that line;
irrational directions can only be reported, not resolved, since no
number-field arithmetic is done.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from rigidplane.core.forms import (
    BinaryForm,
    Exponent,
    HomForm,
    binary_rational_roots,
    nonrational_part,
    points_from_roots,
    raw_evaluate,
    raw_partials,
    raw_substitute,
    restrict_to_line,
    squarefree_factors,
)
from rigidplane.core.linalg import det
from rigidplane.core.projective import ProjLine, ProjPoint, join, normalize
from rigidplane.core.upoly import UniPoly, poly_gcd, rational_roots
from rigidplane.errors import ComponentContained, SharedComponent

RawPoly = Mapping[Exponent, int]


def _degree(p: RawPoly) -> int:
    return max(sum(e) for e in p)


def candidate_centres() -> Iterator[tuple[int, int, int]]:
    """Deterministic sequence of distinct points: coordinate points first, then a grid."""
    yield from ((0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1))
    seen = {(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1)}
    for r in itertools.count(1):
        for v in itertools.product(range(-r, r + 1), repeat=3):
            if max(map(abs, v)) != r or v == (0, 0, 0):
                continue
            n = normalize(v)
            if n not in seen:
                seen.add(n)
                yield n


def centre_frame(c: Sequence[int]) -> list[list[int]]:
    """Integer matrix with third column ``c`` and nonzero determinant."""
    k = next(i for i in range(3) if c[i])
    others = [i for i in range(3) if i != k]
    cols = [[int(i == others[0]) for i in range(3)], [int(i == others[1]) for i in range(3)], list(c)]
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _z_coeffs(poly: RawPoly, x: int, degree: int) -> list[int]:
    """Coefficients in Z (highest first) of ``poly(x, 1, Z)`` with formal degree ``degree``."""
    out = [0] * (degree + 1)
    for (i, j, k), c in poly.items():
        out[degree - k] += c * x**i
    return out


def _sylvester(f: list[int], g: list[int]) -> list[list[int]]:
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + f + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + g + [0] * (size - n - 1 - i))
    return rows


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> UniPoly:
    # Newton divided differences, exact
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly([-xs[i], 1]) + UniPoly([coef[i]])
    return poly


def z_resultant(f: RawPoly, g: RawPoly) -> BinaryForm:
    """``Res_Z(f, g)`` as a binary form in ``(X, Y)`` of degree ``deg f * deg g``.

    Both forms must have a nonzero ``Z**deg`` coefficient (the point
    ``(0:0:1)`` lies on neither). Binary-form variables map as ``s = X``,
    ``t = Y``.
    """
    df, dg = _degree(f), _degree(g)
    if f.get((0, 0, df), 0) == 0 or g.get((0, 0, dg), 0) == 0:
        raise ValueError("(0:0:1) must lie off both curves")
    total = df * dg
    xs = list(range(total + 1))
    ys = [det(_sylvester(_z_coeffs(f, x, df), _z_coeffs(g, x, dg))) for x in xs]
    r = _interpolate(xs, ys)
    low = [int(c) for c in r.coeffs] + [0] * (total + 1 - len(r.coeffs))
    # r(x) = R(x, 1) = sum r_i x^(D-i); BinaryForm lists s^D first
    return BinaryForm(tuple(reversed(low)))


@dataclass(frozen=True)
class Projection:
    """A centre ``c`` off both curves and the curves rewritten in a frame with ``c = (0:0:1)``."""

    centre: ProjPoint
    frame: tuple[tuple[int, ...], ...]
    resultant: BinaryForm

    def direction_line(self, s: int, t: int) -> ProjLine:
        """The line through the centre in direction ``(s:t)`` of the resultant."""
        m = self.frame
        q = normalize([m[i][0] * s + m[i][1] * t for i in range(3)])
        return join(self.centre, ProjPoint(*q))


def project(f: RawPoly, g: RawPoly, avoid: Sequence[RawPoly] = ()) -> Projection:
    """Resultant of ``f`` and ``g`` from the first candidate centre off ``f``, ``g`` and ``avoid``.

    Raises :class:`SharedComponent` when the resultant vanishes identically.
    """
    for c in candidate_centres():
        if any(raw_evaluate(p, c) == 0 for p in (f, g, *avoid)):
            continue
        m = centre_frame(c)
        res = z_resultant(raw_substitute(f, m), raw_substitute(g, m))
        if res.is_zero():
            raise SharedComponent("the forms share a common component")
        return Projection(ProjPoint(*c), tuple(tuple(r) for r in m), res)
    raise AssertionError("unreachable")  # pragma: no cover


def share_component(f: HomForm, g: HomForm) -> bool:
    try:
        project(f.as_dict(), g.as_dict())
    except SharedComponent:
        return True
    return False


def intersection_multiplicity_total(f: HomForm, g: HomForm) -> int:
    """Sum of intersection multiplicities of two curves without common component."""
    res = project(f.as_dict(), g.as_dict()).resultant
    return sum(k * b.degree for k, b in squarefree_factors(res))


def rational_intersections(f: HomForm, g: HomForm) -> list[ProjPoint]:
    """Rational common points of two curves without common component, sorted."""
    proj = project(f.as_dict(), g.as_dict())
    found = set()
    for s, t in binary_rational_roots(proj.resultant):
        l = proj.direction_line(s, t)
        # the line passes through the centre, which is on neither curve
        bf = restrict_to_line(f, l)
        bg = restrict_to_line(g, l)
        common = poly_gcd(bf.dehomogenize(), bg.dehomogenize())
        roots = []
        if bf.t_multiplicity() and bg.t_multiplicity():
            roots.append((1, 0))
        if common.degree > 0:
            roots += [(r.numerator, r.denominator) for r in rational_roots(common)]
        found.update(points_from_roots(l, roots))
    return sorted(found)


# -- singular points ------------------------------------------------------------


@dataclass
class SingularAnalysis:
    """Outcome of the search for singular points of a plane curve.

    ``status`` is ``"smooth"``, ``"singular"`` or ``"unknown"``. Rational
    singular points are listed in ``points``; ``details`` carries the
    evidence for singular points that could not be written down over Q.
    """

    status: str
    points: list[ProjPoint] = field(default_factory=list)
    details: list[str] = field(default_factory=list)


def _restrict_or_none(p: RawPoly, l: ProjLine) -> BinaryForm | None:
    try:
        return restrict_to_line(p, l)
    except ComponentContained:
        return None


def _common_on_line(polys: Sequence[RawPoly], l: ProjLine) -> tuple[list[ProjPoint], bool, bool]:
    """Common zeros of ``polys`` on ``l``: (rational points, irrational ones exist, whole line)."""
    forms = [b for b in (_restrict_or_none(p, l) for p in polys) if b is not None]
    if not forms:
        return [], False, True
    tmult = min(b.t_multiplicity() for b in forms)
    g = forms[0].dehomogenize()
    for b in forms[1:]:
        g = poly_gcd(g, b.dehomogenize())
    roots = [(1, 0)] if tmult else []
    if g.degree > 0:
        common = BinaryForm.homogenize(g, g.degree)
        roots += binary_rational_roots(common)
        irrational = nonrational_part(common) is not None
    else:
        irrational = False
    return points_from_roots(l, roots), irrational, False


def singular_points(form: HomForm) -> SingularAnalysis:
    """Decide smoothness of a plane curve and list its rational singular points.

    Singular points are the common zeros of the three partial derivatives.
    Two of them are eliminated through a projection; the candidate
    directions are the common roots of all pairwise resultants. Rational
    directions are resolved exactly; any irrational candidate direction
    leaves the answer ``"unknown"`` unless a rational singular point has
    already been found.
    """
    if form.degree == 1:
        return SingularAnalysis("smooth")
    partials = [p for p in raw_partials(form.as_dict()) if p]
    if len(partials) == 1:
        # every point of the curve {p = 0} is singular: a multiple component
        return SingularAnalysis("singular", details=["all partials vanish along a curve"])
    f = form.as_dict()
    centre = next(
        c for c in candidate_centres()
        if raw_evaluate(f, c) != 0 and all(raw_evaluate(p, c) != 0 for p in partials)
    )
    m = centre_frame(centre)
    moved = [raw_substitute(p, m) for p in partials]
    resultants = []
    for a, b in itertools.combinations(range(len(partials)), 2):
        res = z_resultant(moved[a], moved[b])
        if not res.is_zero():
            resultants.append(res)
    if not resultants:
        return SingularAnalysis("unknown", details=["every pair of partials shares a component"])
    proj = Projection(ProjPoint(*centre), tuple(tuple(r) for r in m), resultants[0])

    g = resultants[0].dehomogenize()
    tmult = min(r.t_multiplicity() for r in resultants)
    for r in resultants[1:]:
        g = poly_gcd(g, r.dehomogenize())
    if g.degree <= 0 and not tmult:
        return SingularAnalysis("smooth")

    directions: list[tuple[int, int]] = [(1, 0)] if tmult else []
    irrational_dirs = None
    if g.degree > 0:
        cand = BinaryForm.homogenize(g, g.degree)
        directions += [d for d in binary_rational_roots(cand) if d != (1, 0)]
        irrational_dirs = nonrational_part(cand)

    points: set[ProjPoint] = set()
    details = []
    for s, t in directions:
        l = proj.direction_line(s, t)
        pts, irr, whole = _common_on_line(partials, l)
        if whole:
            details.append(f"singular along the line {l}")
        points.update(pts)
        if irr:
            details.append(f"irrational singular points on {l}")
    if points or details:
        return SingularAnalysis("singular", sorted(points), details)
    if irrational_dirs is not None:
        return SingularAnalysis(
            "unknown", details=[f"unresolved irrational directions {irrational_dirs} from {proj.centre}"]
        )
    return SingularAnalysis("smooth")


def gradient(form: HomForm, p: Sequence[int]) -> tuple[int, int, int]:
    return tuple(raw_evaluate(d, p) if d else 0 for d in raw_partials(form.as_dict()))
