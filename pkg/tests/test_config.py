from __future__ import annotations

import itertools

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjLine, ProjPoint, incident
from rigidplane.engine.config import (
    AddCurve,
    AddLine,
    InitQuadrilateral,
    add_curve,
    add_line,
    add_line_or_skip,
    init_quadrilateral,
    unique_curve_through,
)
from rigidplane.errors import (
    AnchorNotOnCurve,
    AnchorNotSingular,
    AnchorOutOfRange,
    BadAnchorCount,
    DuplicateComponent,
    DuplicateLine,
    DuplicatePoints,
    EqualAnchors,
    NoCurve,
    NotUnique,
    UniquenessFailure,
)
from rigidplane.verify.analysis import singular_locus_oracle

QUAD_POINTS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1)]
CONIC = HomForm.from_terms(2, {(2, 0, 0): 1, (0, 1, 1): -1, (0, 0, 2): -2})


def test_quadrilateral_shape(quad):
    assert quad.lines == (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1), ProjLine(1, 1, 1))
    assert [tuple(r.point) for r in quad.singular_points] == QUAD_POINTS
    for r in quad.singular_points:
        assert len(r.witnesses) == 2
        assert sum(incident(r.point, l) for l in quad.lines) == 2
    for a, b, c in itertools.combinations(quad.lines, 3):
        assert sp.Matrix([a, b, c]).det() != 0
    assert quad.trace == [InitQuadrilateral()]


def test_add_line_rejects_unknown_anchor(quad):
    with pytest.raises(AnchorOutOfRange):
        add_line(quad, 1, 6)


def test_add_line_rejects_existing_line(quad):
    with pytest.raises(DuplicateLine):
        add_line(quad, 1, 2)
    assert add_line_or_skip(quad, 1, 2) is quad


def test_add_line_equal_anchors(quad):
    with pytest.raises(EqualAnchors):
        add_line(quad, 3, 3)
    with pytest.raises(EqualAnchors):
        add_line_or_skip(quad, 3, 3)


def test_add_line_meets_every_line(quad):
    # line through (1:0:0) and (0:1:-1), i.e. Y+Z=0
    cfg = add_line(quad, 0, 5)
    assert cfg.lines[-1] == ProjLine(0, 1, 1)
    oracle = singular_locus_oracle(cfg)
    recorded = {r.point: len(r.witnesses) for r in cfg.singular_points}
    assert recorded == oracle
    step = cfg.trace[-1]
    assert isinstance(step, AddLine) and step.anchors == (0, 5)


def test_views_are_persistent(quad):
    a = add_line(quad, 0, 5)
    b = add_line(quad, 3, 2)  # forks: quad is no longer the head
    assert quad.num_lines == 4 and len(quad.singular_points) == 6
    assert a.lines[-1] != b.lines[-1]
    assert a.num_lines == b.num_lines == 5
    c = add_line(a, 3, 2)
    assert c.lines[:5] == a.lines
    assert set(c.lines) == set(a.lines) | set(b.lines)


def test_unique_curve_through():
    pts = [ProjPoint.of(k, k * k - 2, 1) for k in range(5)]
    assert unique_curve_through(pts, 2) == CONIC
    line = unique_curve_through(pts[:2], 1)
    assert line.degree == 1 and all(line.contains(p) for p in pts[:2])
    with pytest.raises(DuplicatePoints):
        unique_curve_through([pts[0]] * 2, 1)
    with pytest.raises(NoCurve):
        unique_curve_through([ProjPoint.of(1, 0, 0), ProjPoint.of(0, 1, 0), ProjPoint.of(0, 0, 1)], 1)
    with pytest.raises(NotUnique):
        unique_curve_through([ProjPoint.of(0, 0, 1), ProjPoint.of(1, 0, 1), ProjPoint.of(2, 0, 1), ProjPoint.of(3, 0, 1), ProjPoint.of(0, 1, 1)], 2)
    assert issubclass(NotUnique, UniquenessFailure)


def _with_points(cfg, pts):
    from rigidplane.engine.gadgets import construct_point

    for p in pts:
        cfg = construct_point(cfg, p)
    return cfg


def test_add_curve_conic():
    anchors = [ProjPoint.of(k, k * k - 2, 1) for k in range(5)]
    cfg = _with_points(init_quadrilateral(), anchors)
    idx = [cfg.index_of(p) for p in anchors]
    out = add_curve(cfg, CONIC, idx)
    assert out.curves == (CONIC,)
    step = out.trace[-1]
    assert isinstance(step, AddCurve)
    # no rational point on Y=0; the quadratic factor is recorded against it
    assert (1, (1, 0, -2)) in [(li, tuple(b.coeffs)) for li, b in step.nonrational]
    for r in out.singular_points:
        assert len(r.witnesses) + r.self_singular >= 2 or len(r.witnesses) >= 2
    for r in out.singular_points[cfg.num_points :]:
        assert CONIC.contains(r.point)


def test_add_curve_errors():
    anchors = [ProjPoint.of(k, k * k - 2, 1) for k in range(5)]
    cfg = _with_points(init_quadrilateral(), anchors)
    idx = [cfg.index_of(p) for p in anchors]
    with pytest.raises(BadAnchorCount):
        add_curve(cfg, CONIC, idx[:4])
    with pytest.raises(EqualAnchors):
        add_curve(cfg, CONIC, idx[:4] + idx[:1])
    off = cfg.index_of(ProjPoint.of(0, 0, 1))
    with pytest.raises(AnchorNotOnCurve):
        add_curve(cfg, CONIC, idx[:4] + [off])
    with pytest.raises(AnchorNotSingular):
        add_curve(cfg, CONIC, idx[:4] + [10**6])
    out = add_curve(cfg, CONIC, idx)
    with pytest.raises(DuplicateComponent):
        add_curve(out, CONIC, idx)


def test_add_curve_degree_one_is_add_line(quad):
    f = HomForm.from_line(ProjLine(0, 1, 1))
    assert add_curve(quad, f, [0, 5]) == add_line(quad, 0, 5)


@given(st.lists(st.tuples(st.integers(0, 200), st.integers(0, 200)), max_size=12))
def test_random_line_configs_match_oracle(pairs):
    cfg = init_quadrilateral()
    for a, b in pairs:
        n = cfg.num_points
        i, j = a % n, b % n
        if i != j:
            cfg = add_line_or_skip(cfg, i, j)
    oracle = singular_locus_oracle(cfg)
    assert {r.point: len(r.witnesses) for r in cfg.singular_points} == oracle
    for k, step in enumerate(cfg.trace[1:], 1):
        assert isinstance(step, AddLine)
