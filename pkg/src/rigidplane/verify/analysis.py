"""Structural checks on a divisor: oracle singular locus, Bezout budgets, normal crossings.

The functions accept anything shaped like a divisor: ``lines``,
``curves`` and ``singular_points`` whose records expose ``point``,
``witnesses`` (component ids printing as ``L3`` or ``C0``) and
``self_singular``. Engine configurations and replayed certificates both
qualify.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from rigidplane.core.curves import SingularAnalysis, gradient, project, singular_points
from rigidplane.core.forms import (
    HomForm,
    binary_rational_roots,
    nonrational_part,
    points_from_roots,
    restrict_to_line,
    squarefree_factors,
    total_multiplicity,
)
from rigidplane.core.projective import ProjLine, ProjPoint, _cross_normalized
from rigidplane.errors import ComponentContained, SharedComponent


# -- singular locus oracle -------------------------------------------------------------


def singular_locus_oracle(div) -> dict[ProjPoint, int]:
    """All pairwise meets of the lines, with the number of lines through each."""
    lines = list(div.lines)
    pairs = Counter()
    for a, b in itertools.combinations(lines, 2):
        pairs[ProjPoint(*_cross_normalized(a, b))] += 1
    # k concurrent lines give k(k-1)/2 pairs
    out = {}
    for p, n in pairs.items():
        k = 2
        while k * (k - 1) // 2 < n:
            k += 1
        out[p] = k
    return out


@dataclass
class OracleComparison:
    ok: bool
    missing: list[ProjPoint] = field(default_factory=list)
    extra: list[ProjPoint] = field(default_factory=list)
    count_mismatch: list[tuple[ProjPoint, int, int]] = field(default_factory=list)


def compare_with_oracle(div) -> OracleComparison:
    """Records met by two or more lines against the oracle, with line-witness counts."""
    oracle = singular_locus_oracle(div)
    recorded = {}
    for r in div.singular_points:
        n = sum(1 for w in r.witnesses if str(w).startswith("L"))
        if n >= 2:
            recorded[r.point] = n
    missing = sorted(set(oracle) - set(recorded))
    extra = sorted(set(recorded) - set(oracle))
    counts = sorted((p, recorded[p], oracle[p]) for p in set(oracle) & set(recorded) if recorded[p] != oracle[p])
    return OracleComparison(not (missing or extra or counts), missing, extra, counts)


# -- Bezout ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class BezoutEntry:
    pair: tuple[str, str]
    total: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.total == self.expected


def bezout_audit(div, line_pairs: bool = True) -> list[BezoutEntry]:
    """Total intersection multiplicity of every component pair against deg * deg.

    Raises :class:`SharedComponent` when two components have a common factor.
    """
    lines = list(div.lines)
    curves = list(div.curves)
    out = []
    if line_pairs:
        # two lines restrict to a linear form in (s, t): one simple root unless they coincide
        for (i, a), (j, b) in itertools.combinations(enumerate(lines), 2):
            if _cross_normalized(a, b) is None:
                raise SharedComponent(f"L{i} and L{j} coincide")
            out.append(BezoutEntry((f"L{i}", f"L{j}"), 1, 1))
    for j, f in enumerate(curves):
        for i, l in enumerate(lines):
            try:
                total = total_multiplicity(restrict_to_line(f, l))
            except ComponentContained:
                raise SharedComponent(f"L{i} is a component of C{j}") from None
            out.append(BezoutEntry((f"L{i}", f"C{j}"), total, f.degree))
    for (i, f), (j, g) in itertools.combinations(enumerate(curves), 2):
        res = project(f.as_dict(), g.as_dict()).resultant
        total = sum(k * b.degree for k, b in squarefree_factors(res))
        out.append(BezoutEntry((f"C{i}", f"C{j}"), total, f.degree * g.degree))
    return out


# -- smoothness ----------------------------------------------------------------------------


def _graph_shape(f: HomForm) -> bool:
    """Whether ``f`` is ``c (Y Z^(n-1) - G(X, Z))`` with an X^n term in G."""
    n = f.degree
    d = f.as_dict()
    with_y = [e for e in d if e[1]]
    return with_y == [(0, 1, n - 1)] and d.get((n, 0, 0), 0) != 0


def smoothness_check(component) -> SingularAnalysis:
    """Smooth, Singular (with rational singular points when found) or Unknown."""
    if isinstance(component, ProjLine) or component.degree == 1:
        return SingularAnalysis("smooth")
    if _graph_shape(component):
        # affine part is a graph y = g(x); the only point at infinity is (0:1:0),
        # where dF/dZ = (n-1) Y Z^(n-2) - ... vanishes exactly when n >= 3
        if component.degree >= 3:
            return SingularAnalysis("singular", [ProjPoint(0, 1, 0)])
        return SingularAnalysis("smooth")
    return singular_points(component)


# -- normal crossings ------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # multiple_point | tangency | self_singular | singular_component | unknown_smoothness
    point: ProjPoint | None
    components: tuple[str, ...]
    detail: str = ""


@dataclass
class NormalCrossingsReport:
    nc: bool
    violations: list[Violation]
    smoothness: dict[str, str]
    unchecked: list[str] = field(default_factory=list)

    @property
    def points(self) -> set[ProjPoint]:
        return {v.point for v in self.violations if v.point is not None}

    def as_dict(self) -> dict:
        return {
            "nc": self.nc,
            "violations": [
                {
                    "kind": v.kind,
                    "point": None if v.point is None else [str(c) for c in v.point],
                    "components": list(v.components),
                    "detail": v.detail,
                }
                for v in self.violations
            ],
            "smoothness": dict(self.smoothness),
            "unchecked": list(self.unchecked),
        }


def normal_crossings_report(div) -> NormalCrossingsReport:
    """Check that components are smooth and meet pairwise transversally at double points."""
    lines = list(div.lines)
    curves = list(div.curves)
    violations: list[Violation] = []
    smooth = {f"L{i}": "smooth" for i in range(len(lines))}
    for j, f in enumerate(curves):
        res = smoothness_check(f)
        smooth[f"C{j}"] = res.status
        if res.status == "unknown":
            violations.append(Violation("unknown_smoothness", None, (f"C{j}",), "; ".join(res.details)))
        elif res.status == "singular":
            for p in res.points:
                violations.append(Violation("self_singular", p, (f"C{j}",)))
            if not res.points or res.details:
                violations.append(Violation("singular_component", None, (f"C{j}",), "; ".join(res.details)))

    for r in div.singular_points:
        wits = tuple(str(w) for w in r.witnesses)
        if len(wits) >= 3:
            violations.append(Violation("multiple_point", r.point, wits, f"{len(wits)} components"))
        curve_wits = [w for w in wits if w.startswith("C")]
        for a, b in itertools.combinations(curve_wits, 2):
            ga = gradient(curves[int(a[1:])], r.point)
            gb = gradient(curves[int(b[1:])], r.point)
            if any(ga) and any(gb) and _cross_normalized(ga, gb) is None:
                violations.append(Violation("tangency", r.point, (a, b), "common tangent"))

    for j, f in enumerate(curves):
        for i, l in enumerate(lines):
            b = restrict_to_line(f, l)
            for k, fac in squarefree_factors(b):
                if k < 2:
                    continue
                for p in points_from_roots(l, binary_rational_roots(fac)):
                    violations.append(Violation("tangency", p, (f"L{i}", f"C{j}"), f"multiplicity {k}"))
                if nonrational_part(fac) is not None:
                    violations.append(
                        Violation("tangency", None, (f"L{i}", f"C{j}"), f"multiplicity {k} along {fac}")
                    )
    unchecked = []
    for (i, f), (j, g) in itertools.combinations(enumerate(curves), 2):
        if nonrational_part(project(f.as_dict(), g.as_dict()).resultant) is not None:
            unchecked.append(f"transversality of C{i} and C{j} at non-rational common points")

    seen = set()
    unique = []
    for v in violations:
        if v not in seen:
            seen.add(v)
            unique.append(v)
    unique.sort(key=lambda v: (v.kind, v.point or (), v.components))
    return NormalCrossingsReport(not unique, unique, smooth, unchecked)
