from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigidplane.core.projective import ProjLine, ProjPoint
from rigidplane.engine.config import init_quadrilateral
from rigidplane.engine.gadgets import (
    Strategy,
    combine_xy,
    construct_integer,
    construct_point,
    construct_rational,
    gadget_add_integers,
    gadget_unit,
    transfer_axis,
)
from rigidplane.errors import BadAnchorShape
from rigidplane.verify.analysis import compare_with_oracle

P = ProjPoint.of


def count(cfg, kind):
    return sum(1 for e in cfg.events if e.kind == kind)


def test_unit(quad):
    cfg = gadget_unit(quad)
    assert cfg.is_singular(P(-1, 1, 1)) and cfg.is_singular(P(0, 1, 1))
    assert cfg.lines[4:] == (ProjLine(1, 0, 1), ProjLine(1, 1, 0), ProjLine(0, 1, -1))
    assert gadget_unit(cfg) == cfg


def test_add_one_plus_one(quad):
    cfg = gadget_unit(quad)
    one = cfg.index_of(P(0, 1, 1))
    out = gadget_add_integers(cfg, one, one)
    for p in [(0, 2, 1), (-1, 1, 1), (-1, 1, 0), (-1, 2, 1)]:
        assert out.is_singular(P(*p))
    assert compare_with_oracle(out).ok


def test_add_one_minus_one_merges(quad):
    cfg = gadget_unit(quad)
    out = gadget_add_integers(cfg, cfg.index_of(P(0, 1, 1)), cfg.index_of(P(0, -1, 1)))
    assert out.index_of(P(0, 0, 1)) == 2
    assert len(out.record(2).witnesses) > 2
    assert compare_with_oracle(out).ok


def test_add_rejects_off_axis(quad):
    with pytest.raises(BadAnchorShape):
        gadget_add_integers(quad, 0, 2)


def test_trivial_integers(quad):
    assert construct_integer(quad, 0) is quad
    assert construct_integer(quad, -1) is quad
    assert P(0, 1, -1) == P(0, -1, 1)


@pytest.mark.parametrize("strategy, calls", [(Strategy.NAIVE, 36), (Strategy.CHAIN, 7)])
def test_integer_gadget_counts(quad, strategy, calls):
    cfg = construct_integer(quad, 37, strategy)
    assert cfg.is_singular(P(0, 37, 1))
    assert count(cfg, "add_integers") == calls
    assert count(cfg, "add_integers") <= (8 if strategy is Strategy.CHAIN else 36)


@given(st.integers(-30, 30), st.sampled_from(list(Strategy)))
def test_construct_integer_lands(p, strategy):
    cfg = construct_integer(init_quadrilateral(), p, strategy)
    assert cfg.is_singular(P(0, p, 1))


@pytest.mark.parametrize(
    "p, q, expected, extra",
    [(1, 2, (1, 0, 2), [(1, -2, 0)]), (3, 1, (3, 0, 1), []), (-2, 4, (1, 0, -2), [(1, -2, 0)])],
)
def test_construct_rational_examples(quad, p, q, expected, extra):
    cfg = construct_rational(quad, p, q)
    assert cfg.is_singular(P(*expected))
    for e in extra:
        assert cfg.is_singular(P(*e))


def test_construct_rational_bad_denominator(quad):
    with pytest.raises(ValueError):
        construct_rational(quad, 1, 0)


def test_transfer_examples(quad):
    cfg = construct_rational(quad, 1, 1)
    out = transfer_axis(cfg, cfg.index_of(P(1, 0, 1)))
    assert out.is_singular(P(0, 1, 1))
    assert transfer_axis(quad, quad.index_of(P(0, 0, 1))) is quad
    cfg = construct_rational(quad, -3, 2)
    assert transfer_axis(cfg, cfg.index_of(P(-3, 0, 2))).is_singular(P(0, -3, 2))
    with pytest.raises(BadAnchorShape):
        transfer_axis(quad, 0)


def test_combine_examples(quad):
    cfg = construct_point(construct_point(quad, (1, 0, 1)), (0, 1, 1))
    out = combine_xy(cfg, cfg.index_of(P(1, 0, 1)), cfg.index_of(P(0, 1, 1)))
    assert out.is_singular(P(1, 1, 1))
    assert out.lines[-2:] == (ProjLine(1, 0, -1), ProjLine(0, 1, -1)) or ProjLine(1, 0, -1) in out.lines
    cfg = construct_point(construct_point(quad, (Fraction(2, 3), 0, 1)), (0, -1, 1))
    out = combine_xy(cfg, cfg.index_of(P(2, 0, 3)), cfg.index_of(P(0, -1, 1)))
    assert out.is_singular(P(2, -3, 3))


def test_construct_point_examples(quad):
    assert construct_point(quad, (1, -1, 0)) is quad
    cfg = construct_point(quad, (3, 5, 1))
    rec = cfg.record(cfg.index_of(P(3, 5, 1)))
    assert sum(1 for w in rec.witnesses if w.kind == "L") >= 2
    cfg = construct_point(quad, (2, 3, 0))
    assert cfg.is_singular(P(2, 3, 1)) and cfg.is_singular(P(2, 3, 0))
    assert ProjLine(3, -2, 0) in cfg.lines


coord = st.integers(-12, 12)


@given(st.tuples(coord, coord, st.integers(0, 12)).filter(any), st.sampled_from(list(Strategy)))
def test_construct_point_property(t, strategy):
    cfg = construct_point(init_quadrilateral(), t, strategy)
    assert cfg.is_singular(P(*t))
    assert compare_with_oracle(cfg).ok
    # every line passes through two records that existed before it
    seen = 6
    for step in cfg.trace[1:]:
        a, b = step.anchors
        assert a < b < seen
        seen += len([r for r in step.derived if r.index >= seen])
