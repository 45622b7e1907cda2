"""Certificate values and their canonical JSON wire form.

The wire form is strict. Arbitrary-precision integers and rationals travel
as decimal strings, and points, lines and forms must already be
normalized. Indices, degrees and exponents are plain JSON integers. Any
deviation is a :class:`ParseError` carrying a JSON path, so every
accepted input re-emits byte for byte.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, Union

from rigidplane.core.forms import BinaryForm, HomForm
from rigidplane.core.projective import ProjLine, ProjPoint, is_normalized
from rigidplane.core.upoly import UniPoly
from rigidplane.errors import ParseError

FORMAT_VERSION = 1

_INT_RE = re.compile(r"-?(0|[1-9][0-9]*)")
_RAT_RE = re.compile(r"(-?(?:0|[1-9][0-9]*))(?:/([1-9][0-9]*))?")
_COMP_RE = re.compile(r"([LC])(0|[1-9][0-9]*)")


@dataclass(frozen=True)
class CertRecord:
    index: int
    point: ProjPoint
    witnesses: tuple[str, ...]
    self_singular: bool = False


@dataclass(frozen=True)
class InitStep:
    pass


@dataclass(frozen=True)
class LineStep:
    anchors: tuple[int, int]
    line: ProjLine
    derived: tuple[CertRecord, ...]


@dataclass(frozen=True)
class CurveStep:
    degree: int
    anchors: tuple[int, ...]
    form: HomForm
    derived: tuple[CertRecord, ...]
    nonrational: tuple[tuple[int, BinaryForm], ...]


CertStep = Union[InitStep, LineStep, CurveStep]


@dataclass(frozen=True)
class RationalClaim:
    point: ProjPoint
    record: int


@dataclass(frozen=True)
class AlgebraicClaim:
    minpoly: UniPoly
    interval: tuple[Fraction, Fraction]
    curve: int


@dataclass(frozen=True)
class CurveClaim:
    form: HomForm


Claim = Union[RationalClaim, AlgebraicClaim, CurveClaim]


@dataclass(frozen=True)
class Certificate:
    steps: tuple[CertStep, ...]
    claims: tuple[Claim, ...] = ()
    version: int = FORMAT_VERSION


# -- emission ------------------------------------------------------------------------


def _rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _form_json(f: HomForm) -> dict:
    return {"degree": f.degree, "monomials": [[e[0], e[1], e[2], str(c)] for e, c in f.terms]}


def _binary_json(b: BinaryForm) -> dict:
    return {"degree": b.degree, "coeffs": [str(c) for c in b.coeffs]}


def _record_json(r: CertRecord) -> dict:
    return {
        "index": r.index,
        "point": [str(c) for c in r.point],
        "witnesses": list(r.witnesses),
        "self_singular": r.self_singular,
    }


def _step_json(s: CertStep) -> dict:
    if isinstance(s, InitStep):
        return {"kind": "init"}
    if isinstance(s, LineStep):
        return {
            "kind": "add_line",
            "anchors": list(s.anchors),
            "line": [str(c) for c in s.line],
            "derived": [_record_json(r) for r in s.derived],
        }
    return {
        "kind": "add_curve",
        "degree": s.degree,
        "anchors": list(s.anchors),
        "form": _form_json(s.form),
        "derived": [_record_json(r) for r in s.derived],
        "nonrational": [{"line": l, "factor": _binary_json(b)} for l, b in s.nonrational],
    }


def _claim_json(c: Claim) -> dict:
    if isinstance(c, RationalClaim):
        return {"kind": "rational", "point": [str(x) for x in c.point], "record": c.record}
    if isinstance(c, AlgebraicClaim):
        return {
            "kind": "algebraic",
            "minpoly": [_rat(x) for x in c.minpoly.high()],
            "interval": [_rat(c.interval[0]), _rat(c.interval[1])],
            "curve": c.curve,
        }
    return {"kind": "curve", "form": _form_json(c.form)}


def certificate_json(cert: Certificate) -> dict:
    return {
        "version": cert.version,
        "steps": [_step_json(s) for s in cert.steps],
        "claims": [_claim_json(c) for c in cert.claims],
    }


def emit_certificate(cert: Certificate) -> bytes:
    """Canonical UTF-8 JSON: sorted keys, no insignificant whitespace."""
    text = json.dumps(certificate_json(cert), sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return text.encode("utf-8")


# -- parsing -------------------------------------------------------------------------


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


class _Reader:
    """Typed accessors that raise ParseError with the JSON path of the offending value."""

    def obj(self, v: Any, path: str, keys: Sequence[str]) -> dict:
        if not isinstance(v, dict):
            raise ParseError("expected an object", path)
        if set(v) != set(keys):
            missing = sorted(set(keys) - set(v))
            extra = sorted(set(v) - set(keys))
            raise ParseError(f"bad keys (missing {missing}, unexpected {extra})", path)
        return v

    def arr(self, v: Any, path: str, length: int | None = None) -> list:
        if not isinstance(v, list):
            raise ParseError("expected an array", path)
        if length is not None and len(v) != length:
            raise ParseError(f"expected {length} elements, got {len(v)}", path)
        return v

    def index(self, v: Any, path: str) -> int:
        if type(v) is not int or v < 0:
            raise ParseError("expected a non-negative integer", path)
        return v

    def boolean(self, v: Any, path: str) -> bool:
        if type(v) is not bool:
            raise ParseError("expected a boolean", path)
        return v

    def integer(self, v: Any, path: str) -> int:
        if not isinstance(v, str) or not _INT_RE.fullmatch(v) or v == "-0":
            raise ParseError("expected a canonical decimal integer string", path)
        return int(v)

    def rational(self, v: Any, path: str) -> Fraction:
        m = _RAT_RE.fullmatch(v) if isinstance(v, str) else None
        if m is None or m.group(1) == "-0" or m.group(2) == "1":
            raise ParseError("expected a canonical rational string", path)
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if math.gcd(num, den) != 1:
            raise ParseError("rational not in lowest terms", path)
        return Fraction(num, den)

    def triple(self, v: Any, path: str) -> tuple[int, int, int]:
        items = self.arr(v, path, 3)
        t = tuple(self.integer(x, f"{path}[{i}]") for i, x in enumerate(items))
        if not any(t) or not is_normalized(t):
            raise ParseError("triple is not primitive with positive leading coordinate", path)
        return t

    def form(self, v: Any, path: str) -> HomForm:
        v = self.obj(v, path, ("degree", "monomials"))
        deg = self.index(v["degree"], f"{path}.degree")
        if deg < 1:
            raise ParseError("degree must be positive", f"{path}.degree")
        terms = []
        for i, m in enumerate(self.arr(v["monomials"], f"{path}.monomials")):
            p = f"{path}.monomials[{i}]"
            m = self.arr(m, p, 4)
            e = tuple(self.index(m[j], f"{p}[{j}]") for j in range(3))
            if sum(e) != deg:
                raise ParseError(f"monomial degree {sum(e)} differs from {deg}", p)
            c = self.integer(m[3], f"{p}[3]")
            if c == 0:
                raise ParseError("zero coefficient", f"{p}[3]")
            terms.append((e, c))
        if not terms:
            raise ParseError("empty form", f"{path}.monomials")
        if len({e for e, _ in terms}) != len(terms):
            raise ParseError("repeated monomial", f"{path}.monomials")
        f = HomForm(deg, tuple(terms))
        if HomForm.from_terms(deg, dict(terms)) != f:
            raise ParseError("form is not normalized or not in graded lex order", path)
        return f

    def binary(self, v: Any, path: str) -> BinaryForm:
        v = self.obj(v, path, ("degree", "coeffs"))
        deg = self.index(v["degree"], f"{path}.degree")
        coeffs = self.arr(v["coeffs"], f"{path}.coeffs", deg + 1)
        b = BinaryForm(tuple(self.integer(c, f"{path}.coeffs[{i}]") for i, c in enumerate(coeffs)))
        if b.is_zero() or deg < 1 or b.primitive() != b:
            raise ParseError("binary form is not primitive with positive leading coefficient", path)
        return b

    def record(self, v: Any, path: str) -> CertRecord:
        v = self.obj(v, path, ("index", "point", "witnesses", "self_singular"))
        wits = []
        for i, w in enumerate(self.arr(v["witnesses"], f"{path}.witnesses")):
            if not isinstance(w, str) or not _COMP_RE.fullmatch(w):
                raise ParseError("expected a component id like L3 or C0", f"{path}.witnesses[{i}]")
            wits.append(w)
        return CertRecord(
            self.index(v["index"], f"{path}.index"),
            ProjPoint(*self.triple(v["point"], f"{path}.point")),
            tuple(wits),
            self.boolean(v["self_singular"], f"{path}.self_singular"),
        )

    def step(self, v: Any, path: str) -> CertStep:
        if not isinstance(v, dict) or "kind" not in v:
            raise ParseError("expected a step object with a kind", path)
        kind = v["kind"]
        if kind == "init":
            self.obj(v, path, ("kind",))
            return InitStep()
        if kind == "add_line":
            v = self.obj(v, path, ("kind", "anchors", "line", "derived"))
            anchors = self.arr(v["anchors"], f"{path}.anchors", 2)
            return LineStep(
                tuple(self.index(a, f"{path}.anchors[{i}]") for i, a in enumerate(anchors)),
                ProjLine(*self.triple(v["line"], f"{path}.line")),
                tuple(self.record(r, f"{path}.derived[{i}]") for i, r in enumerate(self.arr(v["derived"], f"{path}.derived"))),
            )
        if kind == "add_curve":
            v = self.obj(v, path, ("kind", "degree", "anchors", "form", "derived", "nonrational"))
            nonrational = []
            for i, e in enumerate(self.arr(v["nonrational"], f"{path}.nonrational")):
                p = f"{path}.nonrational[{i}]"
                e = self.obj(e, p, ("line", "factor"))
                nonrational.append((self.index(e["line"], f"{p}.line"), self.binary(e["factor"], f"{p}.factor")))
            return CurveStep(
                self.index(v["degree"], f"{path}.degree"),
                tuple(self.index(a, f"{path}.anchors[{i}]") for i, a in enumerate(self.arr(v["anchors"], f"{path}.anchors"))),
                self.form(v["form"], f"{path}.form"),
                tuple(self.record(r, f"{path}.derived[{i}]") for i, r in enumerate(self.arr(v["derived"], f"{path}.derived"))),
                tuple(nonrational),
            )
        raise ParseError(f"unknown step kind {kind!r}", f"{path}.kind")

    def claim(self, v: Any, path: str) -> Claim:
        if not isinstance(v, dict) or "kind" not in v:
            raise ParseError("expected a claim object with a kind", path)
        kind = v["kind"]
        if kind == "rational":
            v = self.obj(v, path, ("kind", "point", "record"))
            return RationalClaim(ProjPoint(*self.triple(v["point"], f"{path}.point")), self.index(v["record"], f"{path}.record"))
        if kind == "algebraic":
            v = self.obj(v, path, ("kind", "minpoly", "interval", "curve"))
            coeffs = self.arr(v["minpoly"], f"{path}.minpoly")
            if len(coeffs) < 2:
                raise ParseError("minimal polynomial must have degree at least 1", f"{path}.minpoly")
            poly = UniPoly.from_high([self.rational(c, f"{path}.minpoly[{i}]") for i, c in enumerate(coeffs)])
            if poly.degree != len(coeffs) - 1:
                raise ParseError("leading coefficient must be nonzero", f"{path}.minpoly[0]")
            iv = self.arr(v["interval"], f"{path}.interval", 2)
            lo = self.rational(iv[0], f"{path}.interval[0]")
            hi = self.rational(iv[1], f"{path}.interval[1]")
            return AlgebraicClaim(poly, (lo, hi), self.index(v["curve"], f"{path}.curve"))
        if kind == "curve":
            v = self.obj(v, path, ("kind", "form"))
            return CurveClaim(self.form(v["form"], f"{path}.form"))
        raise ParseError(f"unknown claim kind {kind!r}", f"{path}.kind")


def parse_certificate(data: bytes | str) -> Certificate:
    """Parse and validate the wire form; raises :class:`ParseError`."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("input is not UTF-8", e.start) from None
    try:
        doc = json.loads(data, object_pairs_hook=_no_duplicates, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.pos) from None
    r = _Reader()
    doc = r.obj(doc, "$", ("version", "steps", "claims"))
    if type(doc["version"]) is not int or doc["version"] != FORMAT_VERSION:
        raise ParseError(f"unsupported version (expected {FORMAT_VERSION})", "$.version")
    steps = tuple(r.step(s, f"$.steps[{i}]") for i, s in enumerate(r.arr(doc["steps"], "$.steps")))
    claims = tuple(r.claim(c, f"$.claims[{i}]") for i, c in enumerate(r.arr(doc["claims"], "$.claims")))
    return Certificate(steps, claims, doc["version"])


def _reject_float(text):
    raise ParseError(f"non-integer number {text}")
