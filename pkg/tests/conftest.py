from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import settings

from rigidplane.engine.config import init_quadrilateral

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

X, Y, Z, T = sp.symbols("X Y Z t")


def sym_form(form) -> sp.Expr:
    """A HomForm as a sympy expression in X, Y, Z."""
    return sum(c * X**i * Y**j * Z**k for (i, j, k), c in form.terms)


def sym_upoly(f) -> sp.Poly:
    return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in f.high()], T)


def to_fraction(r) -> Fraction:
    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


@pytest.fixture
def quad():
    return init_quadrilateral()
