"""The growing divisor and its two extension rules.

A :class:`Config` is an immutable view of an append-only store. Extending
the newest view appends to the shared store in place; extending an older
view forks a private copy first. This keeps long constructions linear in
their output size while every public operation still behaves as a pure
function ``Config -> Config``.

Every component meeting is recorded: after each step, the singular records
are exactly the rational points lying on two or more components, plus the
rational singular points of individual curves, and each record's witnesses
are all components through it.
"""

from __future__ import annotations

import threading
from math import gcd
from array import array
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from rigidplane.core.curves import rational_intersections, share_component, singular_points
from rigidplane.core.forms import (
    BinaryForm,
    HomForm,
    binary_rational_roots,
    monomials,
    nonrational_part,
    points_from_roots,
    restrict_to_line,
)
from rigidplane.core.linalg import kernel_basis, rank
from rigidplane.core.projective import ProjLine, ProjPoint, join
from rigidplane.errors import (
    AnchorNotOnCurve,
    AnchorNotSingular,
    AnchorOutOfRange,
    BadAnchorCount,
    ComponentContained,
    DuplicateComponent,
    DuplicateLine,
    DuplicatePoints,
    EqualAnchors,
    NoCurve,
    NotUnique,
    UniquenessFailure,
)

QUADRILATERAL_LINES = (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1), ProjLine(1, 1, 1))
QUADRILATERAL_POINTS = (
    ProjPoint(1, 0, 0),
    ProjPoint(0, 1, 0),
    ProjPoint(0, 0, 1),
    ProjPoint(1, -1, 0),
    ProjPoint(1, 0, -1),
    ProjPoint(0, 1, -1),
)


class ComponentId(NamedTuple):
    kind: str  # "L" for lines, "C" for curves of degree >= 2
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ComponentId":
        kind, digits = text[:1], text[1:]
        if kind not in ("L", "C") or not digits.isdigit() or (digits != "0" and digits[0] == "0"):
            raise ValueError(f"bad component id {text!r}")
        return cls(kind, int(digits))


def component_key(c: ComponentId) -> tuple[int, int]:
    return (0 if c.kind == "L" else 1, c.index)


@dataclass(frozen=True)
class SingRecord:
    point: ProjPoint
    witnesses: tuple[ComponentId, ...]
    self_singular: bool = False


@dataclass(frozen=True)
class DerivedRecord:
    """A record created or touched by a step, with the witnesses that step added."""

    index: int
    point: ProjPoint
    witnesses: tuple[ComponentId, ...]
    self_singular: bool = False


@dataclass(frozen=True)
class InitQuadrilateral:
    pass


@dataclass(frozen=True)
class AddLine:
    anchors: tuple[int, int]
    line: ProjLine
    derived: tuple[DerivedRecord, ...]


@dataclass(frozen=True)
class AddCurve:
    degree: int
    anchors: tuple[int, ...]
    form: HomForm
    derived: tuple[DerivedRecord, ...]
    nonrational: tuple[tuple[int, BinaryForm], ...]


Step = Union[InitQuadrilateral, AddLine, AddCurve]


@dataclass(frozen=True)
class GadgetEvent:
    kind: str
    target: ProjPoint | None
    first_step: int
    last_step: int  # exclusive
    first_event: int  # events logged inside this one have indices in [first_event, own index)

    @property
    def steps(self) -> int:
        return self.last_step - self.first_step


class _Marks(NamedTuple):
    lines: int
    curves: int
    comps: int
    points: int


class _StepRow(NamedTuple):
    kind: str
    anchors: tuple[int, ...]
    comp: int  # global id of the added component, -1 for init
    merges: array
    nonrational: tuple


class _Store:
    def __init__(self):
        self.lock = threading.Lock()
        self.lines: list[ProjLine] = []
        self.line_index: dict[ProjLine, int] = {}
        self.curves: list[HomForm] = []
        self.curve_index: dict[HomForm, int] = {}
        self.comps: list[ComponentId] = []
        self.line_gid: list[int] = []
        self.curve_gid: list[int] = []
        self.points: list[ProjPoint] = []
        self.point_index: dict[ProjPoint, int] = {}
        self.wits: list[tuple[int, ...]] = []
        self.self_sing: dict[int, tuple[int, ...]] = {}  # record -> curves singular there
        self.steps: list[_StepRow] = []
        self.marks: list[_Marks] = []
        self.events: list[GadgetEvent] = []

    def fork(self, view: "Config") -> "_Store":
        m = view._marks
        new = _Store()
        new.lines = self.lines[: m.lines]
        new.line_index = {l: i for i, l in enumerate(new.lines)}
        new.curves = self.curves[: m.curves]
        new.curve_index = {c: i for i, c in enumerate(new.curves)}
        new.comps = self.comps[: m.comps]
        new.line_gid = self.line_gid[: m.lines]
        new.curve_gid = self.curve_gid[: m.curves]
        new.points = self.points[: m.points]
        new.point_index = {p: i for i, p in enumerate(new.points)}
        new.wits = [w[: bisect_left(w, m.comps)] for w in self.wits[: m.points]]
        new.self_sing = {}
        for r, gs in self.self_sing.items():
            kept = tuple(g for g in gs if g < m.comps)
            if r < m.points and kept:
                new.self_sing[r] = kept
        new.steps = self.steps[: view.num_steps]
        new.marks = self.marks[: view.num_steps]
        new.events = self.events[: view._n_events]
        return new


class Config:
    """Immutable view: a divisor (lines and curves), its singular records, and the trace."""

    __slots__ = ("_store", "_n_steps", "_n_events", "_marks")

    def __init__(self, store: _Store, n_steps: int, n_events: int):
        self._store = store
        self._n_steps = n_steps
        self._n_events = n_events
        self._marks = store.marks[n_steps - 1]

    # -- sizes ---------------------------------------------------------------

    @property
    def num_steps(self) -> int:
        return self._n_steps

    @property
    def num_lines(self) -> int:
        return self._marks.lines

    @property
    def num_curves(self) -> int:
        return self._marks.curves

    @property
    def num_points(self) -> int:
        return self._marks.points

    # -- components ------------------------------------------------------------

    @property
    def lines(self) -> tuple[ProjLine, ...]:
        return tuple(self._store.lines[: self.num_lines])

    @property
    def curves(self) -> tuple[HomForm, ...]:
        return tuple(self._store.curves[: self.num_curves])

    def line(self, i: int) -> ProjLine:
        if not 0 <= i < self.num_lines:
            raise IndexError(i)
        return self._store.lines[i]

    def curve(self, i: int) -> HomForm:
        if not 0 <= i < self.num_curves:
            raise IndexError(i)
        return self._store.curves[i]

    def line_index(self, l: ProjLine) -> int | None:
        i = self._store.line_index.get(l)
        return i if i is not None and i < self.num_lines else None

    def curve_index(self, f: HomForm) -> int | None:
        i = self._store.curve_index.get(f)
        return i if i is not None and i < self.num_curves else None

    def has_line(self, l: ProjLine) -> bool:
        return self.line_index(l) is not None

    def component(self, cid: ComponentId) -> ProjLine | HomForm:
        return self.line(cid.index) if cid.kind == "L" else self.curve(cid.index)

    def components(self) -> list[ComponentId]:
        return list(self._store.comps[: self._marks.comps])

    # -- singular records ------------------------------------------------------

    def point(self, i: int) -> ProjPoint:
        if not 0 <= i < self.num_points:
            raise AnchorOutOfRange(f"no singular record {i} (have {self.num_points})")
        return self._store.points[i]

    def find(self, p: ProjPoint) -> int | None:
        i = self._store.point_index.get(p)
        return i if i is not None and i < self.num_points else None

    def index_of(self, p: ProjPoint) -> int:
        i = self.find(p)
        if i is None:
            raise AnchorNotSingular(f"{p} is not a recorded singular point")
        return i

    def is_singular(self, p: ProjPoint) -> bool:
        return self.find(p) is not None

    def _witness_gids(self, i: int) -> tuple[int, ...]:
        w = self._store.wits[i]
        if w and w[-1] >= self._marks.comps:
            w = w[: bisect_left(w, self._marks.comps)]
        return w

    def record(self, i: int) -> SingRecord:
        p = self.point(i)
        comps = self._store.comps
        wits = sorted((comps[g] for g in self._witness_gids(i)), key=component_key)
        selfs = self._store.self_sing.get(i, ())
        return SingRecord(p, tuple(wits), any(g < self._marks.comps for g in selfs))

    @property
    def singular_points(self) -> list[SingRecord]:
        return [self.record(i) for i in range(self.num_points)]

    def witness_count(self, i: int) -> int:
        return len(self._witness_gids(i))

    # -- history -------------------------------------------------------------------

    @property
    def trace(self) -> list[Step]:
        return [self.step(k) for k in range(self._n_steps)]

    def step(self, k: int) -> Step:
        if not 0 <= k < self._n_steps:
            raise IndexError(k)
        st = self._store
        row = st.steps[k]
        if row.kind == "init":
            return InitQuadrilateral()
        before = st.marks[k - 1]
        after = st.marks[k]
        g = row.comp
        cid = st.comps[g]
        derived = []
        for r in row.merges:
            derived.append(DerivedRecord(r, st.points[r], (cid,), g in st.self_sing.get(r, ())))
        for r in range(before.points, after.points):
            w = st.wits[r]
            w = w[: bisect_left(w, g + 1)]
            wits = tuple(sorted((st.comps[x] for x in w), key=component_key))
            derived.append(DerivedRecord(r, st.points[r], wits, g in st.self_sing.get(r, ())))
        if row.kind == "line":
            return AddLine(row.anchors, st.lines[cid.index], tuple(derived))
        form = st.curves[cid.index]
        return AddCurve(form.degree, row.anchors, form, tuple(derived), row.nonrational)

    def step_kind(self, k: int) -> str:
        """``"init"``, ``"line"`` or ``"curve"``, without materializing the step."""
        if not 0 <= k < self._n_steps:
            raise IndexError(k)
        return self._store.steps[k].kind

    @property
    def events(self) -> list[GadgetEvent]:
        return self._store.events[: self._n_events]

    # -- comparison ----------------------------------------------------------------

    def _key(self):
        return (self.lines, self.curves, tuple(self.singular_points), tuple(self.trace))

    def __eq__(self, other):
        if not isinstance(other, Config):
            return NotImplemented
        if self._store is other._store and self._n_steps == other._n_steps:
            return True
        return self._key() == other._key()

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"Config(lines={self.num_lines}, curves={self.num_curves}, "
            f"singular_points={self.num_points}, steps={self.num_steps})"
        )

    # -- appending -----------------------------------------------------------------

    def _writable_store(self) -> _Store:
        # caller holds self._store.lock
        st = self._store
        if len(st.steps) == self._n_steps and len(st.events) == self._n_events:
            return st
        return st.fork(self)


def init_quadrilateral() -> Config:
    """The four lines X=0, Y=0, Z=0, X+Y+Z=0 and their six meeting points."""
    st = _Store()
    for i, l in enumerate(QUADRILATERAL_LINES):
        st.lines.append(l)
        st.line_index[l] = i
        st.line_gid.append(i)
        st.comps.append(ComponentId("L", i))
    for r, p in enumerate(QUADRILATERAL_POINTS):
        st.points.append(p)
        st.point_index[p] = r
        st.wits.append(tuple(i for i, l in enumerate(QUADRILATERAL_LINES) if sum(a * b for a, b in zip(p, l)) == 0))
    st.steps.append(_StepRow("init", (), -1, array("q"), ()))
    st.marks.append(_Marks(4, 0, 4, 6))
    return Config(st, 1, 0)


def _commit(
    cfg: Config,
    kind: str,
    component: ProjLine | HomForm,
    anchors: tuple[int, ...],
    touched: dict[ProjPoint, set[int]],
    self_points: Iterable[ProjPoint] = (),
    nonrational: tuple = (),
) -> Config:
    """Append one component and its meeting data; ``touched`` maps points to other components' gids."""
    with cfg._store.lock:
        st = cfg._writable_store()
        g = len(st.comps)
        if kind == "line":
            idx = len(st.lines)
            st.lines.append(component)
            st.line_index[component] = idx
            st.line_gid.append(g)
            st.comps.append(ComponentId("L", idx))
        else:
            idx = len(st.curves)
            st.curves.append(component)
            st.curve_index[component] = idx
            st.curve_gid.append(g)
            st.comps.append(ComponentId("C", idx))
        merges = array("q")
        fresh = []
        for p, others in touched.items():
            r = st.point_index.get(p)
            if r is None:
                fresh.append(p)
            else:
                merges.append(r)
                st.wits[r] = tuple(sorted(set(st.wits[r]) | others | {g}))
        merges = array("q", sorted(merges))
        for p in sorted(fresh):
            r = len(st.points)
            st.points.append(p)
            st.point_index[p] = r
            st.wits.append(tuple(sorted(touched[p] | {g})))
        for p in self_points:
            r = st.point_index[p]
            st.self_sing[r] = st.self_sing.get(r, ()) + (g,)
        st.steps.append(_StepRow(kind, tuple(anchors), g, merges, nonrational))
        st.marks.append(_Marks(len(st.lines), len(st.curves), len(st.comps), len(st.points)))
        return Config(st, len(st.steps), len(st.events))


def log_event(cfg: Config, kind: str, target: ProjPoint | None, before: Config) -> Config:
    """Record that a gadget ran between ``before`` and ``cfg`` (metadata only, not part of the trace)."""
    with cfg._store.lock:
        st = cfg._writable_store()
        st.events.append(GadgetEvent(kind, target, before.num_steps, cfg.num_steps, before._n_events))
        return Config(st, cfg.num_steps, len(st.events))


# -- add_line ----------------------------------------------------------------------


def _check_anchor_pair(cfg: Config, i: int, j: int) -> tuple[ProjPoint, ProjPoint]:
    if i == j:
        raise EqualAnchors(f"anchor {i} used twice")
    return cfg.point(i), cfg.point(j)


def _line_meetings(cfg: Config, l: ProjLine) -> dict[ProjPoint, set[int]]:
    st = cfg._store
    touched: dict[ProjPoint, set[int]] = {}
    a0, a1, a2 = l
    gids = st.line_gid
    for li, m in enumerate(st.lines[: cfg.num_lines]):
        b0, b1, b2 = m
        x = a1 * b2 - a2 * b1
        y = a2 * b0 - a0 * b2
        z = a0 * b1 - a1 * b0
        d = gcd(x, y, z)
        if (x or y or z) < 0:
            d = -d
        p = ProjPoint(x // d, y // d, z // d)
        s = touched.get(p)
        if s is None:
            touched[p] = {gids[li]}
        else:
            s.add(gids[li])
    for ci, f in enumerate(st.curves[: cfg.num_curves]):
        try:
            b = restrict_to_line(f, l)
        except ComponentContained:
            raise DuplicateComponent(f"{l} is a component of curve C{ci}") from None
        for p in points_from_roots(l, binary_rational_roots(b)):
            touched.setdefault(p, set()).add(st.curve_gid[ci])
    return touched


def add_line(cfg: Config, i: int, j: int) -> Config:
    """Add the line through singular records ``i`` and ``j``.

    The step records the canonical anchor pair: the two smallest indices of
    records already on the line. Any two of them yield the same line, so the
    choice carries no information and fixing it makes the certificate
    tamper-evident.
    """
    p, q = _check_anchor_pair(cfg, i, j)
    l = join(p, q)
    if cfg.has_line(l):
        raise DuplicateLine(f"{l} is already line L{cfg.line_index(l)}")
    touched = _line_meetings(cfg, l)
    on_line = sorted(r for r in (cfg.find(pt) for pt in touched) if r is not None)
    return _commit(cfg, "line", l, tuple(on_line[:2]), touched)


def add_line_or_skip(cfg: Config, i: int, j: int) -> Config:
    p, q = _check_anchor_pair(cfg, i, j)
    if cfg.has_line(join(p, q)):
        return cfg
    return add_line(cfg, i, j)


# -- curves ------------------------------------------------------------------------------


def vanishing_matrix(points: Sequence[Sequence[int]], degree: int) -> list[list[int]]:
    mons = monomials(degree)
    return [[p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e in mons] for p in points]


def unique_curve_through(points: Sequence[ProjPoint], n: int) -> HomForm:
    """The unique degree-``n`` form through ``points``.

    Raises :class:`NoCurve` if no such form exists and :class:`NotUnique`
    if the forms through the points span more than one dimension.
    """
    if len(set(points)) != len(points):
        raise DuplicatePoints("points must be pairwise distinct")
    ncols = len(monomials(n))
    basis = kernel_basis(vanishing_matrix(points, n), ncols=ncols)
    if not basis:
        raise NoCurve(f"no curve of degree {n} passes through the {len(points)} points")
    if len(basis) > 1:
        raise NotUnique(f"a {len(basis)}-dimensional system of degree-{n} curves passes through the points")
    return HomForm.from_vector(n, basis[0])


def canonical_curve_anchors(cfg: Config, form: HomForm) -> tuple[int, ...]:
    """Deterministic anchor set for a curve step.

    Walk the records on the curve in index order, keep those that add an
    independent vanishing condition until the conditions cut out the curve
    alone, then pad with the smallest unused records on the curve up to
    ``n**2 + 1`` anchors.
    """
    n = form.degree
    need = n * n + 1
    target_rank = len(monomials(n)) - 1
    on_curve = [r for r in range(cfg.num_points) if form.contains(cfg.point(r))]
    chosen: list[int] = []
    rows: list[list[int]] = []
    for r in on_curve:
        if len(rows) == target_rank:
            break
        cand = rows + vanishing_matrix([cfg.point(r)], n)
        if rank(cand) > len(rows):
            rows = cand
            chosen.append(r)
    if len(rows) < target_rank:
        raise UniquenessFailure("the records on the curve do not determine it")
    rest = [r for r in on_curve if r not in set(chosen)]
    chosen += rest[: need - len(chosen)]
    if len(chosen) < need:
        raise BadAnchorCount(f"only {len(chosen)} records lie on the curve, need {need}")
    return tuple(sorted(chosen))


def add_curve(cfg: Config, form: HomForm, anchors: Sequence[int]) -> Config:
    """Add the unique degree-``n`` curve through ``n**2 + 1`` singular records.

    Degree-1 forms are delegated to :func:`add_line`.
    """
    n = form.degree
    anchors = list(anchors)
    if len(anchors) != n * n + 1:
        raise BadAnchorCount(f"a degree-{n} curve needs {n * n + 1} anchors, got {len(anchors)}")
    if len(set(anchors)) != len(anchors):
        raise EqualAnchors("anchors must be distinct")
    pts = []
    for a in anchors:
        if not 0 <= a < cfg.num_points:
            raise AnchorNotSingular(f"anchor {a} is not a singular record (have {cfg.num_points})")
        p = cfg.point(a)
        if not form.contains(p):
            raise AnchorNotOnCurve(f"anchor {a} = {p} is not on {form}")
        pts.append(p)
    if unique_curve_through(pts, n) != form:
        raise UniquenessFailure("the anchors determine a different curve")  # pragma: no cover
    if n == 1:
        return add_line(cfg, anchors[0], anchors[1])
    if cfg.curve_index(form) is not None:
        raise DuplicateComponent(f"{form} is already a component")

    st = cfg._store
    touched: dict[ProjPoint, set[int]] = {}
    nonrational = []
    for li in range(cfg.num_lines):
        l = st.lines[li]
        try:
            b = restrict_to_line(form, l)
        except ComponentContained:
            raise DuplicateComponent(f"{form} contains the line L{li} = {l}") from None
        for p in points_from_roots(l, binary_rational_roots(b)):
            touched.setdefault(p, set()).add(st.line_gid[li])
        rest = nonrational_part(b)
        if rest is not None:
            nonrational.append((li, rest))
    for ci in range(cfg.num_curves):
        other = st.curves[ci]
        if share_component(form, other):
            raise DuplicateComponent(f"{form} shares a component with C{ci}")
        for p in rational_intersections(form, other):
            touched.setdefault(p, set()).add(st.curve_gid[ci])
    self_points = singular_points(form).points
    for p in self_points:
        touched.setdefault(p, set())
    canon = canonical_curve_anchors(cfg, form)
    return _commit(cfg, "curve", form, canon, touched, self_points, tuple(nonrational))


def rational_point(x: int | Fraction, y: int | Fraction, z: int | Fraction = 1) -> ProjPoint:
    return ProjPoint.of(x, y, z)
