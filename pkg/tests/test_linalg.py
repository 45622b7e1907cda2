from __future__ import annotations

from fractions import Fraction

import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rigidplane.core.linalg import det, kernel_basis, primitive_integer_vector, rank

small = st.integers(-6, 6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_identity_has_trivial_kernel():
    assert kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []


def test_zero_matrix_kernel_is_everything():
    assert len(kernel_basis([[0, 0, 0], [0, 0, 0]])) == 3


def test_conic_vanishing_matrix_kernel():
    from rigidplane.core.forms import HomForm, monomials

    pts = [(k, k * k - 2, 1) for k in range(5)]
    mons = monomials(2)
    m = [[p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e in mons] for p in pts]
    ker = kernel_basis(m)
    assert len(ker) == 1
    f = HomForm.from_vector(2, ker[0])
    assert f.as_dict() == {(2, 0, 0): 1, (0, 1, 1): -1, (0, 0, 2): -2}


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sp.Matrix(m).rank()


@given(matrices())
def test_kernel_matches_sympy(m):
    ncols = len(m[0])
    ker = kernel_basis(m)
    assert len(ker) == ncols - sp.Matrix(m).rank()
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)
    if ker:
        assert sp.Matrix([list(v) for v in ker]).rank() == len(ker)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(m):
    assert det(m) == sp.Matrix(m).det()


@given(st.lists(st.fractions(max_denominator=30), min_size=1, max_size=6).filter(any))
def test_primitive_integer_vector(v):
    w = primitive_integer_vector(v)
    assert all(isinstance(x, int) for x in w)
    assert sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in v], w]).rank() == 1
    import math

    assert math.gcd(*w) == 1
