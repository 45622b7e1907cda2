"""Parsers for command-line literals: points, rationals, intervals and polynomials."""

from __future__ import annotations

import re
from fractions import Fraction

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjPoint
from rigidplane.core.upoly import IntervalQ, UniPoly
from rigidplane.errors import LiteralError

_RAT = re.compile(r"\s*([+-]?\s*\d+(?:\s*/\s*\d+)?)\s*")


def parse_rational(text: str, start: int = 0, whole: str | None = None) -> Fraction:
    whole = text if whole is None else whole
    m = _RAT.fullmatch(text)
    if m is None:
        raise LiteralError("expected an integer or a fraction a/b", whole, start)
    body = re.sub(r"\s+", "", m.group(1))
    num, _, den = body.partition("/")
    if den and int(den) == 0:
        raise LiteralError("zero denominator", whole, start + text.index("/") + 1)
    return Fraction(int(num), int(den or 1))


def parse_point(text: str) -> ProjPoint:
    """``( a : b : c )`` with integer or fractional entries, normalized."""
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    if not s.startswith("("):
        raise LiteralError("expected '('", text, offset)
    if not s.endswith(")"):
        raise LiteralError("expected ')'", text, offset + len(s))
    inner = s[1:-1]
    parts = inner.split(":")
    if len(parts) != 3:
        raise LiteralError(f"expected 3 coordinates separated by ':', got {len(parts)}", text, offset + 1)
    pos = offset + 1
    coords = []
    for part in parts:
        coords.append(parse_rational(part, pos, text))
        pos += len(part) + 1
    if not any(coords):
        raise LiteralError("(0:0:0) is not a projective point", text, offset)
    return ProjPoint.of(*coords)


def parse_interval(text: str) -> IntervalQ:
    """``lo,hi`` with rational endpoints, ``lo < hi``."""
    parts = text.split(",")
    if len(parts) != 2:
        raise LiteralError("expected 'lo,hi'", text, 0)
    lo = parse_rational(parts[0], 0, text)
    hi = parse_rational(parts[1], len(parts[0]) + 1, text)
    if not lo < hi:
        raise LiteralError("interval must satisfy lo < hi", text, 0)
    return IntervalQ(lo, hi)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z])|(?P<op>[-+*^]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LiteralError("unexpected character", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _parse_terms(text: str, variables: str) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Sum of terms ``c * v1^e1 * v2^e2 ...``; returns (coefficient, exponent vector) pairs."""
    toks = _tokens(text)
    i = 0
    terms = []
    first = True
    while True:
        kind, val, pos = toks[i]
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            if kind == "end":
                break
            raise LiteralError("expected '+' or '-'", text, pos)
        if toks[i][0] == "end":
            if first:
                raise LiteralError("empty polynomial", text, toks[i][2])
            raise LiteralError("dangling sign", text, toks[i][2])
        coef = Fraction(sign)
        exps = [0] * len(variables)
        seen_factor = False
        while True:
            kind, val, pos = toks[i]
            if kind == "num":
                if seen_factor and toks[i - 1][1] != "*":
                    raise LiteralError("coefficient must come first", text, pos)
                num, _, den = val.partition("/")
                if den and int(den) == 0:
                    raise LiteralError("zero denominator", text, pos)
                coef *= Fraction(int(num), int(den or 1))
                i += 1
            elif kind == "var":
                if val not in variables:
                    raise LiteralError(f"unknown variable {val!r} (expected one of {variables})", text, pos)
                i += 1
                e = 1
                if toks[i][1] == "^":
                    if toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise LiteralError("expected an integer exponent", text, toks[i + 1][2])
                    e = int(toks[i + 1][1])
                    i += 2
                exps[variables.index(val)] += e
            else:
                raise LiteralError("expected a number or a variable", text, pos)
            seen_factor = True
            if toks[i][1] == "*":
                i += 1
                continue
            if toks[i][0] == "var":
                continue
            break
        terms.append((coef, tuple(exps)))
        first = False
        if toks[i][0] == "end":
            break
    return terms


def parse_univariate(text: str) -> UniPoly:
    """A polynomial in one variable, e.g. ``t^2 - 2`` or ``x^3 - 1/2 x + 1``."""
    letters = sorted({c for c in text if c.isalpha()})
    if len(letters) > 1:
        raise LiteralError(f"more than one variable: {', '.join(letters)}", text, 0)
    var = letters[0] if letters else "t"
    coeffs: dict[int, Fraction] = {}
    for c, (e,) in _parse_terms(text, var):
        coeffs[e] = coeffs.get(e, 0) + c
    top = max(coeffs, default=0)
    return UniPoly([coeffs.get(k, 0) for k in range(top + 1)])


def parse_form(text: str) -> HomForm:
    """A homogeneous form in ``X, Y, Z``, e.g. ``X^2 + Y^2 - Z^2``."""
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for c, e in _parse_terms(text, "XYZ"):
        coeffs[e] = coeffs.get(e, 0) + c
    nz = {e: c for e, c in coeffs.items() if c}
    if not nz:
        raise LiteralError("the zero form defines no curve", text, 0)
    degrees = {sum(e) for e in nz}
    if len(degrees) != 1:
        raise LiteralError(f"form is not homogeneous (degrees {sorted(degrees)})", text, 0)
    deg = degrees.pop()
    if deg < 1:
        raise LiteralError("form must have positive degree", text, 0)
    return HomForm.from_terms(deg, nz)
