"""Independent certificate replay.

The verifier rebuilds the divisor from a fresh quadrilateral using only
exact-core primitives and never trusts derived data: each step's line,
anchors, new records, witnesses and non-rational intersection factors are
recomputed and compared for exact equality. Anchors must be the canonical
choice (see :func:`canonical_line_anchors` and
:func:`canonical_curve_anchors`), which leaves no free integer in an
honest certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from rigidplane.core.curves import rational_intersections, singular_points
from rigidplane.core.forms import (
    HomForm,
    binary_divides,
    binary_rational_roots,
    monomials,
    nonrational_part,
    points_from_roots,
    restrict_to_line,
)
from rigidplane.core.linalg import kernel_basis, rank
from rigidplane.core.projective import ProjLine, ProjPoint, _cross_normalized, incident, join
from rigidplane.core.upoly import count_real_roots, is_squarefree, poly_gcd, sturm_sequence
from rigidplane.errors import ClaimFailed, ComponentContained, SharedComponent, StepMismatch, VerificationFailure
from rigidplane.verify.analysis import BezoutEntry, NormalCrossingsReport, bezout_audit, normal_crossings_report
from rigidplane.verify.certificate import (
    AlgebraicClaim,
    CertRecord,
    Certificate,
    CurveClaim,
    CurveStep,
    InitStep,
    LineStep,
    RationalClaim,
)

QUAD_LINES = (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1), ProjLine(1, 1, 1))
QUAD_POINTS = (
    ProjPoint(1, 0, 0),
    ProjPoint(0, 1, 0),
    ProjPoint(0, 0, 1),
    ProjPoint(1, -1, 0),
    ProjPoint(1, 0, -1),
    ProjPoint(0, 1, -1),
)
AXIS_LINE_INDEX = 1  # Y=0 in the quadrilateral


def _wit_key(w: str) -> tuple[int, int]:
    return (0 if w[0] == "L" else 1, int(w[1:]))


@dataclass
class Divisor:
    """Replayed state, shaped like an engine configuration for the analysis functions."""

    lines: list[ProjLine] = field(default_factory=list)
    curves: list[HomForm] = field(default_factory=list)
    singular_points: list[CertRecord] = field(default_factory=list)
    index: dict[ProjPoint, int] = field(default_factory=dict)
    line_index: dict[ProjLine, int] = field(default_factory=dict)
    # curve index -> line index -> non-rational factor recorded at insertion
    nonrational: dict[int, dict[int, object]] = field(default_factory=dict)

    def witnesses(self, r: int) -> tuple[str, ...]:
        return self.singular_points[r].witnesses


@dataclass(frozen=True)
class CheckResult:
    index: int
    ok: bool
    reason: str = ""


@dataclass
class VerificationReport:
    ok: bool
    steps: list[CheckResult]
    claims: list[CheckResult]
    counts: dict[str, int]
    normal_crossings: NormalCrossingsReport | None = None
    bezout_audit: list[BezoutEntry] | None = None
    failures: list[VerificationFailure] = field(default_factory=list)

    @property
    def first_failure(self) -> VerificationFailure | None:
        return self.failures[0] if self.failures else None

    def raise_for_failure(self) -> None:
        if self.failures:
            raise self.failures[0]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "steps": [{"index": r.index, "ok": r.ok, "reason": r.reason} for r in self.steps if not r.ok],
            "claims": [{"index": r.index, "ok": r.ok, "reason": r.reason} for r in self.claims],
            "counts": dict(self.counts),
            "normal_crossings": None if self.normal_crossings is None else self.normal_crossings.as_dict(),
            "bezout_audit": None
            if self.bezout_audit is None
            else {
                "pairs": len(self.bezout_audit),
                "failures": [
                    {"pair": list(e.pair), "total": e.total, "expected": e.expected}
                    for e in self.bezout_audit
                    if not e.ok
                ],
            },
            "first_failure": None if self.first_failure is None else str(self.first_failure),
        }


class _Mismatch(Exception):
    pass


def _fresh() -> Divisor:
    d = Divisor()
    for i, l in enumerate(QUAD_LINES):
        d.lines.append(l)
        d.line_index[l] = i
    for r, p in enumerate(QUAD_POINTS):
        wits = tuple(f"L{i}" for i, l in enumerate(QUAD_LINES) if incident(p, l))
        d.singular_points.append(CertRecord(r, p, wits, False))
        d.index[p] = r
    return d


def canonical_line_anchors(div: Divisor, line: ProjLine) -> tuple[int, ...]:
    """The two smallest indices of records on ``line``."""
    return tuple(sorted(r for r, rec in enumerate(div.singular_points) if incident(rec.point, line))[:2])


def canonical_curve_anchors(div: Divisor, form: HomForm) -> tuple[int, ...]:
    """Greedy independent records on the curve in index order, padded to ``n**2 + 1``."""
    n = form.degree
    mons = monomials(n)
    target = len(mons) - 1
    on = [r for r, rec in enumerate(div.singular_points) if form.contains(rec.point)]
    rows, chosen = [], []
    for r in on:
        if len(rows) == target:
            break
        p = div.singular_points[r].point
        row = [p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e in mons]
        if rank(rows + [row]) > len(rows):
            rows.append(row)
            chosen.append(r)
    taken = set(chosen)
    chosen += [r for r in on if r not in taken][: n * n + 1 - len(chosen)]
    return tuple(sorted(chosen))


def _expected_records(div: Divisor, touched: dict, new_id: str, self_points=frozenset()) -> list[CertRecord]:
    merged, fresh = [], []
    for p, others in touched.items():
        r = div.index.get(p)
        if r is None:
            fresh.append(p)
        else:
            merged.append(CertRecord(r, p, (new_id,), p in self_points))
    merged.sort(key=lambda c: c.index)
    start = len(div.singular_points)
    for k, p in enumerate(sorted(fresh)):
        wits = tuple(sorted(set(touched[p]) | {new_id}, key=_wit_key))
        merged.append(CertRecord(start + k, p, wits, p in self_points))
    return merged


def _compare_derived(claimed, expected) -> None:
    if len(claimed) != len(expected):
        raise _Mismatch(f"derived data lists {len(claimed)} records, recomputation gives {len(expected)}")
    for k, (c, e) in enumerate(zip(claimed, expected)):
        if c != e:
            raise _Mismatch(f"derived record {k} is {_fmt(c)}, recomputation gives {_fmt(e)}")


def _fmt(r: CertRecord) -> str:
    flag = ", self-singular" if r.self_singular else ""
    return f"#{r.index} {r.point} on {','.join(r.witnesses)}{flag}"


def _apply(div: Divisor, records: list[CertRecord]) -> None:
    for rec in records:
        if rec.index < len(div.singular_points):
            old = div.singular_points[rec.index]
            wits = tuple(sorted(set(old.witnesses) | set(rec.witnesses), key=_wit_key))
            div.singular_points[rec.index] = CertRecord(rec.index, old.point, wits, old.self_singular or rec.self_singular)
        else:
            div.singular_points.append(rec)
            div.index[rec.point] = rec.index


def _anchor_points(div: Divisor, anchors) -> list[ProjPoint]:
    n = len(div.singular_points)
    for a in anchors:
        if a >= n:
            raise _Mismatch(f"anchor {a} does not name an existing record (have {n})")
    if len(set(anchors)) != len(anchors):
        raise _Mismatch("anchors repeat")
    return [div.singular_points[a].point for a in anchors]


def _replay_line(div: Divisor, step: LineStep) -> None:
    p, q = _anchor_points(div, step.anchors)
    line = join(p, q)
    if line != step.line:
        raise _Mismatch(f"line {step.line} is not the join {line} of its anchors")
    if line in div.line_index:
        raise _Mismatch(f"line {line} is already L{div.line_index[line]}")
    canon = canonical_line_anchors(div, line)
    if tuple(step.anchors) != canon:
        raise _Mismatch(f"anchors {list(step.anchors)} are not the canonical pair {list(canon)}")
    new_id = f"L{len(div.lines)}"
    touched: dict[ProjPoint, set[str]] = {}
    for i, m in enumerate(div.lines):
        touched.setdefault(ProjPoint(*_cross_normalized(line, m)), set()).add(f"L{i}")
    for j, f in enumerate(div.curves):
        try:
            b = restrict_to_line(f, line)
        except ComponentContained:
            raise _Mismatch(f"line {line} is a component of C{j}") from None
        for pt in points_from_roots(line, binary_rational_roots(b)):
            touched.setdefault(pt, set()).add(f"C{j}")
    expected = _expected_records(div, touched, new_id)
    _compare_derived(step.derived, expected)
    div.lines.append(line)
    div.line_index[line] = len(div.lines) - 1
    _apply(div, expected)


def _replay_curve(div: Divisor, step: CurveStep) -> None:
    form = step.form
    n = form.degree
    if step.degree != n:
        raise _Mismatch(f"step degree {step.degree} differs from form degree {n}")
    if n < 2:
        raise _Mismatch("lines must be added with add_line")
    if len(step.anchors) != n * n + 1:
        raise _Mismatch(f"a degree-{n} curve needs {n * n + 1} anchors, got {len(step.anchors)}")
    pts = _anchor_points(div, step.anchors)
    for a, p in zip(step.anchors, pts):
        if not form.contains(p):
            raise _Mismatch(f"anchor {a} = {p} is not on the curve")
    mons = monomials(n)
    kernel = kernel_basis([[p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e in mons] for p in pts], ncols=len(mons))
    if len(kernel) != 1:
        raise _Mismatch(f"anchors cut out a {len(kernel)}-dimensional system of curves, need exactly 1")
    if HomForm.from_vector(n, kernel[0]) != form:
        raise _Mismatch("anchors determine a different curve")  # pragma: no cover
    if form in div.curves:
        raise _Mismatch(f"curve is already C{div.curves.index(form)}")
    canon = canonical_curve_anchors(div, form)
    if tuple(step.anchors) != canon:
        raise _Mismatch(f"anchors {list(step.anchors)} are not the canonical set {list(canon)}")
    new_id = f"C{len(div.curves)}"
    touched: dict[ProjPoint, set[str]] = {}
    nonrational = []
    for i, l in enumerate(div.lines):
        try:
            b = restrict_to_line(form, l)
        except ComponentContained:
            raise _Mismatch(f"the curve contains L{i}") from None
        for pt in points_from_roots(l, binary_rational_roots(b)):
            touched.setdefault(pt, set()).add(f"L{i}")
        rest = nonrational_part(b)
        if rest is not None:
            nonrational.append((i, rest))
    for j, g in enumerate(div.curves):
        try:
            common = rational_intersections(form, g)
        except SharedComponent:
            raise _Mismatch(f"the curve shares a component with C{j}") from None
        for pt in common:
            touched.setdefault(pt, set()).add(f"C{j}")
    selfs = set(singular_points(form).points)
    for pt in selfs:
        touched.setdefault(pt, set())
    expected = _expected_records(div, touched, new_id, selfs)
    _compare_derived(step.derived, expected)
    if tuple(step.nonrational) != tuple(nonrational):
        raise _Mismatch("non-rational intersection factors differ from recomputation")
    div.curves.append(form)
    div.nonrational[len(div.curves) - 1] = dict(nonrational)
    _apply(div, expected)


def _is_dyadic_cell(lo: Fraction, hi: Fraction) -> bool:
    w = hi - lo
    if w <= 0 or w > 1 or w.numerator != 1 or w.denominator & (w.denominator - 1):
        return False
    return (lo / w).denominator == 1


def _check_claim(div: Divisor, claim) -> None:
    if isinstance(claim, RationalClaim):
        if claim.record >= len(div.singular_points):
            raise _Mismatch(f"record {claim.record} does not exist")
        rec = div.singular_points[claim.record]
        if rec.point != claim.point:
            raise _Mismatch(f"record {claim.record} is {rec.point}, not {claim.point}")
        if len(rec.witnesses) < 2 and not rec.self_singular:
            raise _Mismatch(f"{claim.point} has a single witness and is not self-singular")
        return
    if isinstance(claim, AlgebraicClaim):
        f = claim.minpoly
        lo, hi = claim.interval
        if not f.is_monic():
            raise _Mismatch("minimal polynomial is not monic")
        if not is_squarefree(f):
            raise _Mismatch("minimal polynomial is not squarefree")
        if not _is_dyadic_cell(lo, hi):
            raise _Mismatch(f"interval [{lo}, {hi}] is not a dyadic cell of width at most 1")
        if f(lo) == 0 or f(hi) == 0:
            raise _Mismatch("an interval endpoint is a root")
        if count_real_roots(f, lo, hi, sturm_sequence(f)) != 1:
            raise _Mismatch(f"interval [{lo}, {hi}] does not isolate exactly one root")
        if f.sign_at(lo) * f.sign_at(hi) >= 0:  # pragma: no cover - implied by the count for squarefree f
            raise _Mismatch("no sign change on the interval")
        if claim.curve >= len(div.curves):
            raise _Mismatch(f"curve C{claim.curve} does not exist")
        factor = div.nonrational.get(claim.curve, {}).get(AXIS_LINE_INDEX)
        if factor is None:
            raise _Mismatch(f"C{claim.curve} has no non-rational intersection with Y=0")
        form = div.curves[claim.curve]
        if not binary_divides(factor, restrict_to_line(form, div.lines[AXIS_LINE_INDEX])):
            raise _Mismatch("recorded factor does not divide the restriction to Y=0")  # pragma: no cover
        g = poly_gcd(f, factor.dehomogenize())
        if g.degree < 1 or count_real_roots(g, lo, hi, sturm_sequence(g)) != 1:
            raise _Mismatch("the isolated root is not a root of the recorded factor")
        return
    if isinstance(claim, CurveClaim):
        form = claim.form
        present = form.as_line() in div.line_index if form.degree == 1 else form in div.curves
        if not present:
            raise _Mismatch(f"{form} is not a component")
        return
    raise _Mismatch(f"unknown claim {claim!r}")  # pragma: no cover


def _run(cert: Certificate, analyze: bool) -> tuple[VerificationReport, Divisor]:
    div = _fresh()
    step_results: list[CheckResult] = []
    claim_results: list[CheckResult] = []
    failures: list[VerificationFailure] = []
    replay_ok = bool(cert.steps)
    if not cert.steps:
        failures.append(StepMismatch(0, "certificate has no steps"))
    for k, step in enumerate(cert.steps):
        if not replay_ok:
            step_results.append(CheckResult(k, False, "not replayed"))
            continue
        try:
            if k == 0:
                if not isinstance(step, InitStep):
                    raise _Mismatch("the first step must be init")
            elif isinstance(step, InitStep):
                raise _Mismatch("init may only appear first")
            elif isinstance(step, LineStep):
                _replay_line(div, step)
            else:
                _replay_curve(div, step)
            step_results.append(CheckResult(k, True))
        except _Mismatch as e:
            replay_ok = False
            step_results.append(CheckResult(k, False, str(e)))
            failures.append(StepMismatch(k, str(e)))
    for k, claim in enumerate(cert.claims):
        if not replay_ok:
            claim_results.append(CheckResult(k, False, "replay failed"))
            continue
        try:
            _check_claim(div, claim)
            claim_results.append(CheckResult(k, True))
        except _Mismatch as e:
            claim_results.append(CheckResult(k, False, str(e)))
            failures.append(ClaimFailed(k, str(e)))
    counts = {
        "steps": len(cert.steps),
        "lines": len(div.lines),
        "curves": len(div.curves),
        "singular_points": len(div.singular_points),
        "claims": len(cert.claims),
    }
    report = VerificationReport(not failures, step_results, claim_results, counts, failures=failures)
    if analyze and replay_ok:
        report.normal_crossings = normal_crossings_report(div)
        report.bezout_audit = bezout_audit(div)
        bad = [e for e in report.bezout_audit if not e.ok]
        if bad:  # pragma: no cover - cannot happen for a replayed divisor
            report.ok = False
            failures.append(StepMismatch(len(cert.steps) - 1, f"Bezout budget violated for {bad[0].pair}"))
    return report, div


def verify_certificate(cert: Certificate, analyze: bool = True) -> VerificationReport:
    """Replay ``cert`` and check its claims.

    With ``analyze`` the report also carries the Bezout audit and the
    normal-crossings report of the replayed divisor.
    """
    return _run(cert, analyze)[0]


def replay(cert: Certificate) -> Divisor:
    """The replayed divisor; raises the first failure."""
    report, div = _run(cert, analyze=False)
    report.raise_for_failure()
    return div
