"""Point gadgets and the planner that composes them.

Each gadget adds lines only through :func:`add_line_or_skip`, so a gadget
never fails because an earlier construction already produced one of its
lines. The advertised output of every gadget is looked up as a recorded
singular point afterwards; a missing record would be an engine bug and
surfaces as :class:`AnchorNotSingular`.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd

from rigidplane.core.projective import ProjPoint
from rigidplane.engine.config import Config, add_line_or_skip, log_event
from rigidplane.errors import BadAnchorShape


class Strategy(enum.Enum):
    NAIVE = "naive"
    CHAIN = "chain"


def _pt(x, y, z) -> ProjPoint:
    return ProjPoint.of(x, y, z)


def _through(cfg: Config, p: ProjPoint, q: ProjPoint) -> Config:
    return add_line_or_skip(cfg, cfg.index_of(p), cfg.index_of(q))


def y_axis_value(p: ProjPoint) -> Fraction | None:
    """``v`` when ``p = (0:v:1)``, else None."""
    if p.x != 0 or p.z == 0:
        return None
    return Fraction(p.y, p.z)


def x_axis_value(p: ProjPoint) -> Fraction | None:
    """``u`` when ``p = (u:0:1)``, else None."""
    if p.y != 0 or p.z == 0:
        return None
    return Fraction(p.x, p.z)


def _integer_on_y_axis(cfg: Config, i: int) -> int:
    v = y_axis_value(cfg.point(i))
    if v is None or v.denominator != 1:
        raise BadAnchorShape(f"record {i} = {cfg.point(i)} is not of the form (0:k:1)")
    return int(v)


def gadget_unit(cfg: Config) -> Config:
    """Make (0:1:1) singular with at most three lines.

    L1 = X+Z=0 through (0:1:0) and (-1:0:1), L2 = X+Y=0 through (-1:1:0)
    and (0:0:1). They meet in (-1:1:1); the line M = Y-Z=0 through (1:0:0)
    and (-1:1:1) meets X=0 in (0:1:1).
    """
    before = cfg
    cfg = _through(cfg, _pt(0, 1, 0), _pt(-1, 0, 1))
    cfg = _through(cfg, _pt(-1, 1, 0), _pt(0, 0, 1))
    cfg = _through(cfg, _pt(1, 0, 0), _pt(-1, 1, 1))
    target = _pt(0, 1, 1)
    cfg.index_of(target)
    return log_event(cfg, "unit", target, before)


def gadget_add_integers(cfg: Config, sp_p: int, sp_q: int) -> Config:
    """From (0:p:1) and (0:q:1) make (0:p+q:1) singular, with at most five lines."""
    p = _integer_on_y_axis(cfg, sp_p)
    q = _integer_on_y_axis(cfg, sp_q)
    before = cfg
    cfg = _through(cfg, _pt(0, p, 1), _pt(1, 0, 0))  # L1: Y = pZ, meets X+Z=0 in (-1:p:1)
    cfg = _through(cfg, _pt(-1, 0, 1), _pt(0, 1, 0))  # L2: X+Z=0
    cfg = _through(cfg, _pt(0, 0, 1), _pt(-1, p, 1))  # M1, meets Z=0 in (-1:p:0)
    cfg = _through(cfg, _pt(-1, p, 0), _pt(0, q, 1))  # M2, meets L2 in (-1:p+q:1)
    cfg = _through(cfg, _pt(1, 0, 0), _pt(-1, p + q, 1))  # M3, meets X=0 in (0:p+q:1)
    target = _pt(0, p + q, 1)
    cfg.index_of(target)
    return log_event(cfg, "add_integers", target, before)


def transfer_axis(cfg: Config, sp: int) -> Config:
    """From (v:0:1) make (0:v:1) singular via the line through (v:0:1) and (1:-1:0)."""
    p = cfg.point(sp)
    v = x_axis_value(p)
    if v is None:
        raise BadAnchorShape(f"record {sp} = {p} is not of the form (v:0:1)")
    target = _pt(0, v, 1)
    if cfg.is_singular(target):
        return cfg
    before = cfg
    cfg = _through(cfg, p, _pt(1, -1, 0))
    cfg.index_of(target)
    return log_event(cfg, "transfer", target, before)


def combine_xy(cfg: Config, sp_u: int, sp_v: int) -> Config:
    """From (u:0:1) and (0:v:1) make (u:v:1) singular with at most two lines."""
    pu, pv = cfg.point(sp_u), cfg.point(sp_v)
    u, v = x_axis_value(pu), y_axis_value(pv)
    if u is None:
        raise BadAnchorShape(f"record {sp_u} = {pu} is not of the form (u:0:1)")
    if v is None:
        raise BadAnchorShape(f"record {sp_v} = {pv} is not of the form (0:v:1)")
    target = _pt(u, v, 1)
    if cfg.is_singular(target):
        return cfg
    before = cfg
    cfg = _through(cfg, pu, _pt(0, 1, 0))
    cfg = _through(cfg, pv, _pt(1, 0, 0))
    cfg.index_of(target)
    return log_event(cfg, "combine", target, before)


# -- integers ----------------------------------------------------------------------


def _add(cfg: Config, a: int, b: int) -> Config:
    if cfg.is_singular(_pt(0, a + b, 1)):
        return cfg
    return gadget_add_integers(cfg, cfg.index_of(_pt(0, a, 1)), cfg.index_of(_pt(0, b, 1)))


def _unit(cfg: Config, sign: int) -> Config:
    # (0:-1:1) is the quadrilateral point (0:1:-1)
    if sign < 0 or cfg.is_singular(_pt(0, 1, 1)):
        return cfg
    return gadget_unit(cfg)


def construct_integer(cfg: Config, p: int, strategy: Strategy = Strategy.CHAIN) -> Config:
    """Make (0:p:1) singular.

    NAIVE walks p = ±1, ±2, ... one addition at a time, resuming from the
    largest value already recorded. CHAIN doubles and adds along the binary
    expansion of |p|.
    """
    if cfg.is_singular(_pt(0, p, 1)):
        return cfg
    sign = 1 if p > 0 else -1
    n = abs(p)
    cfg = _unit(cfg, sign)
    if strategy is Strategy.NAIVE:
        cur = next(k for k in range(n, 0, -1) if k == 1 or cfg.is_singular(_pt(0, sign * k, 1)))
        while cur < n:
            cfg = _add(cfg, sign * cur, sign)
            cur += 1
        return cfg
    cur = 1
    for bit in bin(n)[3:]:
        cfg = _add(cfg, sign * cur, sign * cur)
        cur *= 2
        if bit == "1":
            cfg = _add(cfg, sign * cur, sign)
            cur += 1
    return cfg


def construct_rational(cfg: Config, p: int, q: int, strategy: Strategy = Strategy.CHAIN) -> Config:
    """Make (p/q:0:1) singular for an integer p and a positive integer q.

    The line through (1:0:-1) and (0:-q:1) meets Z=0 in (1:-q:0); the line
    through (0:p:1) and (1:-q:0) meets Y=0 in (p:0:q).
    """
    if q <= 0:
        raise ValueError("q must be a positive integer")
    g = gcd(p, q)
    p, q = p // g, q // g
    target = _pt(p, 0, q)
    if cfg.is_singular(target):
        return cfg
    before = cfg
    cfg = construct_integer(cfg, p, strategy)
    cfg = construct_integer(cfg, -q, strategy)
    cfg = _through(cfg, _pt(1, 0, -1), _pt(0, -q, 1))
    cfg = _through(cfg, _pt(0, p, 1), _pt(1, -q, 0))
    cfg.index_of(target)
    return log_event(cfg, "rational", target, before)


def _construct_x(cfg: Config, u: Fraction, strategy: Strategy) -> Config:
    return construct_rational(cfg, u.numerator, u.denominator, strategy)


def _construct_y(cfg: Config, v: Fraction, strategy: Strategy) -> Config:
    if v.denominator == 1:
        return construct_integer(cfg, int(v), strategy)
    if cfg.is_singular(_pt(0, v, 1)):
        return cfg
    cfg = _construct_x(cfg, v, strategy)
    return transfer_axis(cfg, cfg.index_of(_pt(v, 0, 1)))


def construct_point(cfg: Config, t, strategy: Strategy = Strategy.CHAIN) -> Config:
    """Make the rational point ``t`` singular; a no-op when it already is."""
    t = ProjPoint.of(*t)
    if cfg.is_singular(t):
        return cfg
    before = cfg
    if t.z == 0:
        affine = _pt(t.x, t.y, 1)
        cfg = construct_point(cfg, affine, strategy)
        cfg = _through(cfg, affine, _pt(0, 0, 1))
        cfg.index_of(t)
        cfg = log_event(cfg, "infinity", t, before)
    else:
        u, v = t.affine()
        if u == 0:
            cfg = _construct_y(cfg, v, strategy)
        elif v == 0:
            cfg = _construct_x(cfg, u, strategy)
        else:
            cfg = _construct_x(cfg, u, strategy)
            cfg = _construct_y(cfg, v, strategy)
            cfg = combine_xy(cfg, cfg.index_of(_pt(u, 0, 1)), cfg.index_of(_pt(0, v, 1)))
    cfg.index_of(t)
    return log_event(cfg, "point", t, before)
