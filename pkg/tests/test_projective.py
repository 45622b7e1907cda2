from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from rigidplane.core.projective import (
    ProjLine,
    ProjPoint,
    collinear,
    incident,
    is_normalized,
    join,
    line_basis,
    meet,
    normalize,
)
from rigidplane.errors import EqualLines, EqualPoints, ZeroVector

coord = st.integers(-50, 50)
triple = st.tuples(coord, coord, coord).filter(any)


def sym_cross(a, b):
    v = sp.Matrix(a).cross(sp.Matrix(b))
    return [int(x) for x in v]


def same_projective(u, v) -> bool:
    return sp.Matrix([u, v]).rank() == 1


@pytest.mark.parametrize(
    "raw, expected",
    [((2, 4, 6), (1, 2, 3)), ((0, -3, 3), (0, 1, -1)), ((Fraction(3, 5), -2, 1), (3, -10, 5))],
)
def test_normalize_examples(raw, expected):
    assert normalize(raw) == expected


def test_normalize_zero():
    with pytest.raises(ZeroVector):
        normalize((0, 0, 0))


@given(triple, st.integers(-9, 9).filter(bool))
def test_normalize_scale_invariant(v, k):
    n = normalize(v)
    assert is_normalized(n)
    assert normalize([k * x for x in v]) == n
    assert same_projective(n, v)


@pytest.mark.parametrize(
    "p, q, line",
    [
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        ((0, 1, 0), (-1, 0, 1), (1, 0, 1)),
        ((0, 0, 1), (-1, 2, 1), (2, 1, 0)),
    ],
)
def test_join_examples(p, q, line):
    l = join(ProjPoint.of(*p), ProjPoint.of(*q))
    assert tuple(l) == line
    assert incident(ProjPoint.of(*p), l) and incident(ProjPoint.of(*q), l)


@pytest.mark.parametrize(
    "l, m, point",
    [
        ((1, 0, 1), (1, 1, 0), (-1, 1, 1)),
        ((0, 1, -1), (1, 0, 0), (0, 1, 1)),
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ],
)
def test_meet_examples(l, m, point):
    assert meet(ProjLine(*l), ProjLine(*m)) == ProjPoint.of(*point)


def test_incidence_examples():
    assert incident(ProjPoint.of(1, -1, 0), ProjLine(1, 1, 1))
    assert not incident(ProjPoint.of(1, 1, 1), ProjLine(1, 0, 0))
    assert not incident(ProjPoint.of(0, 1, -1), ProjLine(0, 1, 0))


def test_join_equal_points_rejected():
    with pytest.raises(EqualPoints):
        join(ProjPoint.of(1, 2, 3), ProjPoint.of(2, 4, 6))


def test_meet_equal_lines_rejected():
    with pytest.raises(EqualLines):
        meet(ProjLine(1, 2, 3), ProjLine(1, 2, 3))


@given(triple, triple)
def test_join_matches_cross_product_oracle(a, b):
    assume(any(sym_cross(a, b)))
    p, q = ProjPoint.of(*a), ProjPoint.of(*b)
    l = join(p, q)
    assert same_projective(list(l), sym_cross(a, b))
    assert incident(p, l) and incident(q, l)


@given(triple, triple, triple)
def test_collinear_matches_determinant(a, b, c):
    d = sp.Matrix([a, b, c]).det()
    assert collinear(ProjPoint.of(*a), ProjPoint.of(*b), ProjPoint.of(*c)) == (d == 0)


@given(triple)
def test_line_basis_spans_line(v):
    l = ProjLine(*normalize(v))
    p, q = line_basis(l)
    assert incident(p, l) and incident(q, l) and p != q
