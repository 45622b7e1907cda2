"""Turn engine configurations and targets into certificates."""

from __future__ import annotations

from typing import Iterable

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjPoint
from rigidplane.engine.config import AddCurve, AddLine, Config, DerivedRecord, InitQuadrilateral
from rigidplane.engine.embed import AlgebraicWitness
from rigidplane.verify.certificate import (
    AlgebraicClaim,
    CertRecord,
    Certificate,
    Claim,
    CurveClaim,
    CurveStep,
    InitStep,
    LineStep,
    RationalClaim,
)


def _record(d: DerivedRecord) -> CertRecord:
    return CertRecord(d.index, d.point, tuple(str(w) for w in d.witnesses), d.self_singular)


def certificate_steps(cfg: Config) -> tuple:
    out = []
    for st in cfg.trace:
        if isinstance(st, InitQuadrilateral):
            out.append(InitStep())
        elif isinstance(st, AddLine):
            out.append(LineStep(st.anchors, st.line, tuple(_record(d) for d in st.derived)))
        elif isinstance(st, AddCurve):
            out.append(
                CurveStep(st.degree, st.anchors, st.form, tuple(_record(d) for d in st.derived), st.nonrational)
            )
        else:  # pragma: no cover
            raise TypeError(st)
    return tuple(out)


def rational_claim(cfg: Config, p) -> RationalClaim:
    p = ProjPoint.of(*p)
    return RationalClaim(p, cfg.index_of(p))


def algebraic_claim(cfg: Config, w: AlgebraicWitness) -> Claim:
    """A rational claim when the root is rational, otherwise an algebraic one."""
    if w.rational_root is not None:
        return rational_claim(cfg, w.point)
    return AlgebraicClaim(w.minpoly, (w.root_interval.lo, w.root_interval.hi), w.curve.index)


def curve_claim(form: HomForm) -> CurveClaim:
    return CurveClaim(form)


def certificate_from_config(cfg: Config, claims: Iterable[Claim] = ()) -> Certificate:
    return Certificate(certificate_steps(cfg), tuple(claims))


def point_certificate(cfg: Config, targets: Iterable) -> Certificate:
    """Certificate of ``cfg`` with one rational claim per target, in order."""
    return certificate_from_config(cfg, [rational_claim(cfg, t) for t in targets])
