"""Curve embeddings: interpolation curves through constructed rational points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import X_AXIS_LINE, ProjLine, ProjPoint
from rigidplane.core.upoly import (
    IntervalQ,
    UniPoly,
    count_real_roots,
    is_squarefree,
    rational_roots,
    sturm_sequence,
)
from rigidplane.engine.config import (
    ComponentId,
    Config,
    add_curve,
    add_line_or_skip,
    log_event,
    unique_curve_through,
)
from rigidplane.engine.gadgets import Strategy, construct_point
from rigidplane.errors import (
    BadAnchorCount,
    DuplicatePoints,
    NotMonic,
    NotSquarefree,
    PointNotOnCurve,
    RootNotIsolated,
    UniquenessFailure,
)

DEFAULT_REFINE_WIDTH = Fraction(1, 10**6)


@dataclass(frozen=True)
class AlgebraicWitness:
    """The claim that ``(u:0:1)`` lies on ``curve`` and on the line Y=0.

    ``root_interval`` is a closed dyadic cell ``[m/2^k, (m+1)/2^k]`` whose
    endpoints are not roots of ``minpoly`` and which contains exactly one
    root, ``u``. When ``u`` is rational, ``rational_root`` holds it and the
    point is an ordinary singular record.
    """

    minpoly: UniPoly
    root_interval: IntervalQ
    curve: ComponentId
    rational_root: Fraction | None = None
    axis: ProjLine = X_AXIS_LINE

    @property
    def point(self) -> ProjPoint | None:
        if self.rational_root is None:
            return None
        return ProjPoint.of(self.rational_root, 0, 1)


def embedding_form(f: UniPoly) -> HomForm:
    """``Y Z^(n-1) - Z^n f(X/Z)`` with integer coefficients, normalized."""
    n = f.degree
    terms = {(0, 1, n - 1): Fraction(1)}
    for k, c in enumerate(f.coeffs):
        if c:
            key = (k, 0, n - k)
            terms[key] = terms.get(key, 0) - c
    return HomForm.from_terms(n, terms)


def interpolation_points(f: UniPoly) -> list[ProjPoint]:
    """The points ``(k : f(k) : 1)`` for ``k = 0 .. n^2``."""
    n = f.degree
    return [ProjPoint.of(k, f(k), 1) for k in range(n * n + 1)]


def roots_in_open(f: UniPoly, iv: IntervalQ, seq=None) -> int:
    seq = seq if seq is not None else sturm_sequence(f)
    return count_real_roots(f, iv.lo, iv.hi, seq) - (f(iv.hi) == 0)


def _check_minpoly(f: UniPoly) -> None:
    if f.degree < 1:
        raise ValueError("the polynomial must have degree at least 1")
    if not f.is_monic():
        raise NotMonic(f"{f} is not monic")
    if not is_squarefree(f):
        raise NotSquarefree(f"{f} has a repeated factor")


def dyadic_cell(f: UniPoly, root_choice: IntervalQ, width: Fraction) -> IntervalQ:
    """The level-``k`` dyadic cell around the root isolated by ``root_choice``.

    ``k`` starts at the least level with ``2**-k <= width`` and increases
    until the closed cell holds no other root and no root on its boundary.
    The root must be irrational.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("refinement width must be positive")
    seq = sturm_sequence(f)
    lo, hi = root_choice.lo, root_choice.hi

    def at_or_below(x: Fraction) -> bool:
        # is the chosen root u <= x ?
        if x <= lo:
            return False
        if x >= hi:
            return True
        return count_real_roots(f, lo, x, seq) >= 1

    k = 0
    while Fraction(1, 2**k) > width:
        k += 1
    while True:
        scale = 2**k
        a = (lo * scale).__floor__()
        b = (hi * scale).__ceil__()
        # least M with u <= M / scale
        while a < b:
            mid = (a + b) // 2
            if at_or_below(Fraction(mid, scale)):
                b = mid
            else:
                a = mid + 1
        cell = IntervalQ(Fraction(a - 1, scale), Fraction(a, scale))
        if f(cell.lo) != 0 and f(cell.hi) != 0 and count_real_roots(f, cell.lo, cell.hi, seq) == 1:
            return cell
        k += 1


def embed_algebraic(
    cfg: Config,
    f: UniPoly,
    root_choice: IntervalQ,
    strategy: Strategy = Strategy.CHAIN,
    width: Fraction = DEFAULT_REFINE_WIDTH,
) -> tuple[Config, AlgebraicWitness]:
    """Embed the curve ``Y Z^(n-1) = Z^n f(X/Z)`` so that ``(u:0:1)`` lies on it and on Y=0."""
    _check_minpoly(f)
    n = roots_in_open(f, root_choice)
    if n != 1:
        raise RootNotIsolated(f"{root_choice} contains {n} roots of {f}, need exactly 1")
    before = cfg
    pts = interpolation_points(f)
    for p in pts:
        cfg = construct_point(cfg, p, strategy)
    form = embedding_form(f)
    if form.degree == 1:
        line = form.as_line()
        cfg = add_line_or_skip(cfg, cfg.index_of(pts[0]), cfg.index_of(pts[1]))
        comp = ComponentId("L", cfg.line_index(line))
    else:
        if cfg.curve_index(form) is None:
            cfg = add_curve(cfg, form, [cfg.index_of(p) for p in pts])
        comp = ComponentId("C", cfg.curve_index(form))
    rational = [r for r in rational_roots(f) if root_choice.lo < r < root_choice.hi]
    if rational:
        r = rational[0]
        half = min(Fraction(width) / 2, (r - root_choice.lo) / 2, (root_choice.hi - r) / 2)
        witness = AlgebraicWitness(f, IntervalQ(r - half, r + half), comp, r)
        cfg.index_of(witness.point)
    else:
        witness = AlgebraicWitness(f, dyadic_cell(f, root_choice, width), comp)
    return log_event(cfg, "embed_algebraic", form, before), witness


def embed_curve(
    cfg: Config, form: HomForm, points: Sequence[ProjPoint], strategy: Strategy = Strategy.CHAIN
) -> Config:
    """Make ``n**2 + 1`` rational points of ``form`` singular, then add the curve."""
    n = form.degree
    points = [ProjPoint.of(*p) for p in points]
    if len(points) != n * n + 1:
        raise BadAnchorCount(f"a degree-{n} curve needs {n * n + 1} points, got {len(points)}")
    if len(set(points)) != len(points):
        raise DuplicatePoints("the points must be pairwise distinct")
    for p in points:
        if not form.contains(p):
            raise PointNotOnCurve(f"{p} is not on {form}")
    if unique_curve_through(points, n) != form:
        raise UniquenessFailure("the points determine a different curve")  # pragma: no cover
    before = cfg
    for p in points:
        cfg = construct_point(cfg, p, strategy)
    if n == 1:
        cfg = add_line_or_skip(cfg, cfg.index_of(points[0]), cfg.index_of(points[1]))
    elif cfg.curve_index(form) is None:
        cfg = add_curve(cfg, form, [cfg.index_of(p) for p in points])
    return log_event(cfg, "embed_curve", form, before)
