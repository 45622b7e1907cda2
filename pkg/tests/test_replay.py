from __future__ import annotations

import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import algebraic_cert_bytes, integer_positions, point_cert_bytes, tamper_rejected
from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjPoint
from rigidplane.engine.config import init_quadrilateral
from rigidplane.engine.embed import embed_curve
from rigidplane.errors import ClaimFailed, StepMismatch
from rigidplane.verify.certificate import emit_certificate, parse_certificate
from rigidplane.verify.export import certificate_from_config, curve_claim
from rigidplane.verify.replay import replay, verify_certificate


def _edit(data: bytes, fn) -> bytes:
    doc = json.loads(data)
    fn(doc)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


@pytest.fixture(scope="module")
def point_bytes():
    return point_cert_bytes([(3, 5, 1)])


@pytest.fixture(scope="module")
def sqrt2_bytes():
    return algebraic_cert_bytes([1, 0, -2], 1, 2)


def test_point_certificate_verifies(point_bytes):
    report = verify_certificate(parse_certificate(point_bytes))
    assert report.ok and report.first_failure is None
    assert all(c.ok for c in report.claims)
    assert all(e.ok for e in report.bezout_audit)


def test_empty_and_repeated_init():
    for text in (b'{"claims":[],"steps":[],"version":1}', b'{"claims":[],"steps":[{"kind":"init"},{"kind":"init"}],"version":1}'):
        assert not verify_certificate(parse_certificate(text)).ok


def test_perturbed_derived_point(point_bytes):
    doc = json.loads(point_bytes)
    k, r = next(
        (k, r)
        for k, s in enumerate(doc["steps"])
        for r, rec in enumerate(s.get("derived", []))
        if rec["point"][2] == "1" and rec["point"][0] != "0"
    )

    def bump(d):
        p = d["steps"][k]["derived"][r]["point"]
        p[0] = str(int(p[0]) + 1)

    report = verify_certificate(parse_certificate(_edit(point_bytes, bump)))
    assert not report.ok
    failure = report.first_failure
    assert isinstance(failure, StepMismatch) and failure.step == k
    with pytest.raises(StepMismatch):
        replay(parse_certificate(_edit(point_bytes, bump)))


def test_moved_root_interval(sqrt2_bytes):
    def move(d):
        d["claims"][0]["interval"] = ["3", "4"]

    report = verify_certificate(parse_certificate(_edit(sqrt2_bytes, move)))
    assert not report.ok and isinstance(report.first_failure, ClaimFailed)


def test_sqrt2_certificate(sqrt2_bytes):
    cert = parse_certificate(sqrt2_bytes)
    report = verify_certificate(cert)
    assert report.ok
    div = replay(cert)
    assert len(div.curves) == 1


def test_wrong_claim_record(point_bytes):
    def other(d):
        d["claims"][0]["record"] = 2

    assert not verify_certificate(parse_certificate(_edit(point_bytes, other))).ok


def test_curve_claim():
    circle = HomForm.from_terms(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
    cfg = embed_curve(init_quadrilateral(), circle, [(3, 4, 5), (4, 3, 5), (0, 1, 1), (1, 0, 1), (-3, 4, 5)])
    data = emit_certificate(certificate_from_config(cfg, [curve_claim(circle)]))
    assert verify_certificate(parse_certificate(data)).ok
    other = HomForm.from_terms(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -4})
    data = emit_certificate(certificate_from_config(cfg, [curve_claim(other)]))
    assert not verify_certificate(parse_certificate(data)).ok


def test_dropping_a_step_is_detected(point_bytes):
    def drop(d):
        del d["steps"][2]

    assert not verify_certificate(parse_certificate(_edit(point_bytes, drop))).ok


def test_swapped_anchors_are_detected(point_bytes):
    def swap(d):
        a = d["steps"][1]["anchors"]
        d["steps"][1]["anchors"] = [a[0], a[1] + 1]

    assert not verify_certificate(parse_certificate(_edit(point_bytes, swap))).ok


@given(st.integers(0, 10**6))
def test_single_integer_tamper_rejected(seed):
    rng = random.Random(seed)
    data = SAMPLES[seed % len(SAMPLES)]
    positions = integer_positions(json.loads(data))
    assert tamper_rejected(data, rng.choice(positions), rng)


SAMPLES = [point_cert_bytes([(3, 5, 1)]), point_cert_bytes([(2, -7, 3), (1, 1, 0)])]
