from __future__ import annotations

import itertools

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjLine, ProjPoint
from rigidplane.core.upoly import IntervalQ, UniPoly
from rigidplane.engine.config import add_line, init_quadrilateral
from rigidplane.engine.embed import embed_algebraic
from rigidplane.engine.gadgets import gadget_unit
from rigidplane.errors import SharedComponent
from rigidplane.verify.analysis import (
    bezout_audit,
    compare_with_oracle,
    normal_crossings_report,
    singular_locus_oracle,
    smoothness_check,
)

CONIC = HomForm.from_terms(2, {(2, 0, 0): 1, (0, 1, 1): -1, (0, 0, 2): -2})
CUBIC = HomForm.from_terms(3, {(0, 1, 2): 1, (3, 0, 0): -1, (0, 0, 3): 2})
QUAD = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1)]


class _Div:
    def __init__(self, lines, curves=(), records=()):
        self.lines, self.curves, self.singular_points = list(lines), list(curves), list(records)


def test_oracle_quadrilateral(quad):
    assert singular_locus_oracle(quad) == {ProjPoint.of(*p): 2 for p in QUAD}
    assert compare_with_oracle(quad).ok


def test_oracle_after_extra_line(quad):
    cfg = add_line(quad, 0, 5)
    oracle = singular_locus_oracle(cfg)
    new = ProjLine(0, 1, 1)
    for l in quad.lines:
        m = sp.Matrix(l).cross(sp.Matrix(new))
        assert ProjPoint.of(*[int(c) for c in m]) in oracle
    assert compare_with_oracle(cfg).ok


def test_oracle_two_lines():
    assert singular_locus_oracle(_Div([ProjLine(1, 0, 0), ProjLine(0, 1, 0)])) == {ProjPoint(0, 0, 1): 2}


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any), min_size=2, max_size=7, unique=True))
def test_oracle_multiplicities_match_brute_force(raw):
    from rigidplane.core.projective import normalize

    lines = list({ProjLine(*normalize(v)) for v in raw})
    oracle = singular_locus_oracle(_Div(lines))
    for p, k in oracle.items():
        assert k == sum(1 for l in lines if sum(a * b for a, b in zip(p, l)) == 0)
    for a, b in itertools.combinations(lines, 2):
        assert ProjPoint.of(*[int(c) for c in sp.Matrix(a).cross(sp.Matrix(b))]) in oracle


def test_bezout_examples():
    entries = bezout_audit(_Div([ProjLine(0, 1, 0), ProjLine(1, 0, 0)], [CONIC]))
    assert {e.pair: (e.total, e.expected) for e in entries} == {
        ("L0", "L1"): (1, 1),
        ("L0", "C0"): (2, 2),
        ("L1", "C0"): (2, 2),
    }
    with pytest.raises(SharedComponent):
        bezout_audit(_Div([ProjLine(1, 0, 0)], [HomForm.from_terms(2, {(1, 1, 0): 1})]))


def test_smoothness_examples():
    assert smoothness_check(CONIC).status == "smooth"
    res = smoothness_check(CUBIC)
    assert res.status == "singular" and res.points == [ProjPoint(0, 1, 0)]
    assert smoothness_check(ProjLine(1, 2, 3)).status == "smooth"


def test_smoothness_graph_shortcut_agrees_with_general_path():
    from rigidplane.core.curves import singular_points

    for high in ([1, 0, -2], [1, 0, 0, -2], [1, -1, 0, 3], [1, 0, 0, 0, 5]):
        from rigidplane.engine.embed import embedding_form

        f = embedding_form(UniPoly.from_high(high))
        fast, slow = smoothness_check(f), singular_points(f)
        assert fast.status == slow.status and fast.points == slow.points


def test_normal_crossings_quadrilateral(quad):
    rep = normal_crossings_report(quad)
    assert rep.nc and rep.violations == []


def test_normal_crossings_after_unit(quad):
    cfg = gadget_unit(quad)
    rep = normal_crossings_report(cfg)
    assert not rep.nc
    triple = {r.point for r in cfg.singular_points if len(r.witnesses) >= 3}
    assert rep.points == triple and triple
    assert {v.kind for v in rep.violations} == {"multiple_point"}


def test_normal_crossings_cubic():
    cfg, _ = embed_algebraic(init_quadrilateral(), UniPoly.from_high([1, 0, 0, -2]), IntervalQ(1, 2))
    rep = normal_crossings_report(cfg)
    assert not rep.nc
    assert any(v.kind == "self_singular" and v.point == ProjPoint(0, 1, 0) for v in rep.violations)


def test_tangency_detected():
    # Y=0 is tangent to Y Z - X^2 at (0:0:1)
    parabola = HomForm.from_terms(2, {(0, 1, 1): 1, (2, 0, 0): -1})
    rep = normal_crossings_report(_Div([ProjLine(0, 1, 0)], [parabola]))
    assert any(v.kind == "tangency" and v.point == ProjPoint(0, 0, 1) for v in rep.violations)
