from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import algebraic_cert_bytes, point_cert_bytes
from rigidplane.errors import ParseError
from rigidplane.verify.certificate import Certificate, InitStep, emit_certificate, parse_certificate


@pytest.fixture(scope="module")
def cert_bytes():
    return point_cert_bytes([(3, 5, 1)])


@pytest.fixture(scope="module")
def sqrt2_bytes():
    return algebraic_cert_bytes([1, 0, -2], 1, 2)


def test_round_trip_byte_identical(cert_bytes, sqrt2_bytes):
    for data in (cert_bytes, sqrt2_bytes):
        assert emit_certificate(parse_certificate(data)) == data


def test_quadrilateral_only():
    data = emit_certificate(Certificate((InitStep(),)))
    assert data == b'{"claims":[],"steps":[{"kind":"init"}],"version":1}'
    assert parse_certificate(data) == Certificate((InitStep(),))


def test_truncated_input(cert_bytes):
    with pytest.raises(ParseError):
        parse_certificate(cert_bytes[:-5])


def _edit(data: bytes, fn) -> bytes:
    doc = json.loads(data)
    fn(doc)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def test_non_primitive_triple(cert_bytes):
    def scale(doc):
        doc["steps"][1]["line"] = [str(2 * int(c)) for c in doc["steps"][1]["line"]]

    with pytest.raises(ParseError):
        parse_certificate(_edit(cert_bytes, scale))


@pytest.mark.parametrize(
    "text",
    [
        b"",
        b"[]",
        b'{"claims":[],"steps":[{"kind":"init"}]}',
        b'{"claims":[],"steps":[{"kind":"init"}],"version":1,"extra":0}',
        b'{"claims":[],"steps":[{"kind":"init"}],"version":1.0}',
        b'{"claims":[],"steps":[{"kind":"init"}],"version":2}',
        b'{"claims":[],"steps":[{"kind":"init"}],"version":1,"version":1}',
        b'{"claims":[],"steps":[{"kind":"nope"}],"version":1}',
        b'{"claims":[{"kind":"rational","point":["01","0","1"],"record":0}],"steps":[{"kind":"init"}],"version":1}',
        b'{"claims":[{"kind":"rational","point":["1","0","0"],"record":true}],"steps":[{"kind":"init"}],"version":1}',
    ],
)
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse_certificate(text)


def test_parse_error_locates_problem(cert_bytes):
    def bad(doc):
        doc["steps"][1]["anchors"][0] = "x"

    with pytest.raises(ParseError) as e:
        parse_certificate(_edit(cert_bytes, bad))
    assert "steps" in str(e.value)


@given(st.binary(max_size=80))
def test_arbitrary_bytes_never_crash(data):
    try:
        parse_certificate(data)
    except ParseError:
        pass


@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 20)).filter(any))
def test_round_trip_property(t):
    data = point_cert_bytes([t])
    assert emit_certificate(parse_certificate(data)) == data
