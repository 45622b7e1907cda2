"""Shared test utilities: certificate builders and single-integer tampering."""

from __future__ import annotations

import json
import random
import re

from rigidplane.core.upoly import IntervalQ, UniPoly
from rigidplane.engine.config import init_quadrilateral
from rigidplane.engine.embed import embed_algebraic
from rigidplane.engine.gadgets import Strategy, construct_point
from rigidplane.errors import ParseError
from rigidplane.verify.certificate import emit_certificate, parse_certificate
from rigidplane.verify.export import algebraic_claim, certificate_from_config, point_certificate
from rigidplane.verify.replay import verify_certificate

_NUM = re.compile(r"-?\d+(?:/\d+)?")


def point_cert_bytes(targets, strategy=Strategy.CHAIN) -> bytes:
    cfg = init_quadrilateral()
    for t in targets:
        cfg = construct_point(cfg, t, strategy)
    return emit_certificate(point_certificate(cfg, targets))


def algebraic_cert_bytes(high, lo, hi) -> bytes:
    cfg, w = embed_algebraic(init_quadrilateral(), UniPoly.from_high(high), IntervalQ(lo, hi))
    return emit_certificate(certificate_from_config(cfg, [algebraic_claim(cfg, w)]))


def random_point(rng: random.Random, max_height: int):
    while True:
        z = rng.randint(0, max_height)
        x = rng.randint(-max_height, max_height)
        y = rng.randint(-max_height, max_height)
        if x or y or z:
            return (x, y, z)


def integer_positions(obj, path=()):
    """Paths of every JSON integer and every integer inside a numeric string."""
    if isinstance(obj, bool):
        return []
    if isinstance(obj, int):
        return [path]
    if isinstance(obj, str):
        return [path] if _NUM.fullmatch(obj) else []
    if isinstance(obj, dict):
        return [p for k in sorted(obj) for p in integer_positions(obj[k], path + (k,))]
    if isinstance(obj, list):
        return [p for i, v in enumerate(obj) for p in integer_positions(v, path + (i,))]
    return []


def _get(obj, path):
    for k in path:
        obj = obj[k]
    return obj


def mutate(obj, path, rng: random.Random):
    """Change one integer at ``path`` (for a fraction, its numerator or denominator)."""
    parent = _get(obj, path[:-1])
    value = parent[path[-1]]
    delta = rng.choice([-2, -1, 1, 2, rng.randint(3, 1000)])
    if isinstance(value, int):
        parent[path[-1]] = value + delta
        return
    num, _, den = value.partition("/")
    if den and rng.random() < 0.5:
        parent[path[-1]] = f"{num}/{int(den) + delta}"
    else:
        parent[path[-1]] = f"{int(num) + delta}" + (f"/{den}" if den else "")


def tamper_rejected(data: bytes, path, rng: random.Random) -> bool:
    doc = json.loads(data)
    mutate(doc, path, rng)
    mutated = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    if mutated == data:
        return True
    try:
        cert = parse_certificate(mutated)
    except ParseError:
        return True
    return not verify_certificate(cert, analyze=False).ok
