"""``rigidplane`` command line.

Exit codes: 0 success, 1 usage or input error, 2 verification failure
(including unparsable certificates), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from rigidplane.cli.literals import parse_form, parse_interval, parse_point, parse_rational, parse_univariate
from rigidplane.cli.render import RenderOptions, render_svg
from rigidplane.core.projective import ProjPoint
from rigidplane.engine.config import init_quadrilateral
from rigidplane.engine.embed import DEFAULT_REFINE_WIDTH, embed_algebraic, embed_curve
from rigidplane.engine.gadgets import Strategy, construct_point
from rigidplane.engine.stats import stats
from rigidplane.errors import ParseError, RigidError
from rigidplane.verify.analysis import bezout_audit, compare_with_oracle, normal_crossings_report
from rigidplane.verify.certificate import (
    AlgebraicClaim,
    Certificate,
    CurveClaim,
    CurveStep,
    LineStep,
    RationalClaim,
    emit_certificate,
    parse_certificate,
)
from rigidplane.verify.export import algebraic_claim, certificate_from_config, curve_claim, rational_claim
from rigidplane.verify.replay import Divisor, replay, verify_certificate

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=argparse.SUPPRESS)
    p.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--refine-width", metavar="RAT", default=argparse.SUPPRESS)
    return p


DEFAULTS = {"strategy": "chain", "out": None, "json": False, "refine_width": None}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="rigidplane", description="Rigid plane divisors: construct, certify, verify.", parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("construct", parents=[common], help="make rational points singular")
    p.add_argument("targets", nargs="+", metavar="POINT", help='point literal such as "(3/5 : -2 : 1)"')

    p = sub.add_parser("embed-algebraic", parents=[common], help="embed (u:0:1) for a real algebraic u")
    p.add_argument("minpoly", help='monic squarefree polynomial such as "t^2-2"')
    p.add_argument("--root", required=True, metavar="LO,HI", help="interval isolating the chosen root")

    p = sub.add_parser("embed-curve", parents=[common], help="embed a curve through n^2+1 rational points")
    p.add_argument("form", help='form in X, Y, Z such as "X^2+Y^2-Z^2"')
    p.add_argument("points", nargs="+", metavar="POINT")

    p = sub.add_parser("verify", parents=[common], help="replay and check a certificate")
    p.add_argument("path")

    p = sub.add_parser("render", parents=[common], help="draw a verified certificate as SVG")
    p.add_argument("path")
    p.add_argument("--viewport", default="-5,5,-5,5", metavar="XMIN,XMAX,YMIN,YMAX")
    p.add_argument("--size", default="600,600", metavar="W,H")
    p.add_argument("--density", type=int, default=200, help="curve sample columns (>= 2)")
    p.add_argument("--labels", action="store_true", help="label singular points")
    p.add_argument("--mark-infinity", action="store_true", help="mark points at infinity on the boundary")

    p = sub.add_parser("stats", parents=[common], help="sizes against target heights")
    p.add_argument("path")

    p = sub.add_parser("oracle-check", parents=[common], help="oracle, Bezout and normal-crossings checks")
    p.add_argument("path")
    return parser


# -- helpers -------------------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_certificate(path: str) -> Certificate:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from None
    return parse_certificate(data)


def _write(path: str | None, data: bytes, out) -> None:
    if path is None:
        out.write(data.decode("utf-8"))
        if not data.endswith(b"\n"):
            out.write("\n")
        return
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from None


def _refine_width(args) -> Fraction:
    if args.refine_width is None:
        return DEFAULT_REFINE_WIDTH
    w = parse_rational(args.refine_width)
    if w <= 0:
        raise UsageError("--refine-width must be positive")
    return w


def _emit_verified(cert: Certificate, args, out, summary: dict) -> int:
    """Verify in-process, then write the certificate and a summary."""
    data = emit_certificate(cert)
    report = verify_certificate(parse_certificate(data), analyze=False)
    if not report.ok:  # pragma: no cover - the engine only emits valid traces
        print(f"internal error: emitted certificate fails verification: {report.first_failure}", file=sys.stderr)
        return EXIT_VERIFY
    _write(args.out, data, out)
    summary_out = out if args.out is not None else sys.stderr
    if args.json:
        print(_dump(summary), file=summary_out)
    else:
        for line in _summary_lines(summary):
            print(line, file=summary_out)
    return EXIT_OK


def _summary_lines(summary: dict) -> list[str]:
    lines = []
    for t in summary.get("targets", []):
        gadgets = ", ".join(f"{k}={v}" for k, v in t["gadgets"].items()) or "none"
        lines.append(
            f"{t['target']}: height {t['height']}, lines added {t['lines_added']}, "
            f"curves added {t['curves_added']}, steps {t['steps']}, gadgets: {gadgets}"
        )
    for key in ("interval", "curve"):
        if key in summary:
            lines.append(f"{key}: {summary[key]}")
    lines.append(
        f"total: {summary['lines']} lines, {summary['curves']} curves, "
        f"{summary['singular_points']} singular points, {summary['trace_length']} steps"
    )
    return lines


# -- commands ------------------------------------------------------------------------------


def cmd_construct(args, out) -> int:
    targets = [parse_point(t) for t in args.targets]
    strategy = Strategy(args.strategy)
    cfg = init_quadrilateral()
    for t in targets:
        cfg = construct_point(cfg, t, strategy)
    cert = certificate_from_config(cfg, [rational_claim(cfg, t) for t in targets])
    return _emit_verified(cert, args, out, stats(cfg, targets).as_dict())


def cmd_embed_algebraic(args, out) -> int:
    f = parse_univariate(args.minpoly)
    iv = parse_interval(args.root)
    cfg, w = embed_algebraic(init_quadrilateral(), f, iv, Strategy(args.strategy), _refine_width(args))
    cert = certificate_from_config(cfg, [algebraic_claim(cfg, w)])
    summary = stats(cfg).as_dict()
    summary["interval"] = f"[{w.root_interval.lo}, {w.root_interval.hi}]"
    summary["curve"] = str(cfg.component(w.curve))
    return _emit_verified(cert, args, out, summary)


def cmd_embed_curve(args, out) -> int:
    form = parse_form(args.form)
    pts = [parse_point(p) for p in args.points]
    cfg = embed_curve(init_quadrilateral(), form, pts, Strategy(args.strategy))
    cert = certificate_from_config(cfg, [curve_claim(form)])
    summary = stats(cfg).as_dict()
    summary["curve"] = str(form)
    return _emit_verified(cert, args, out, summary)


def cmd_verify(args, out) -> int:
    cert = _read_certificate(args.path)
    report = verify_certificate(cert)
    if args.json:
        print(_dump(report.as_dict()), file=out)
    else:
        c = report.counts
        status = "OK" if report.ok else "FAILED"
        print(
            f"{status}: {c['steps']} steps, {c['lines']} lines, {c['curves']} curves, "
            f"{c['singular_points']} singular points, {c['claims']} claims",
            file=out,
        )
        if not report.ok:
            f = report.first_failure
            print(f"{type(f).__name__}: {f}", file=out)
        elif report.normal_crossings is not None:
            nc = report.normal_crossings
            print(f"normal crossings: {'yes' if nc.nc else 'no'} ({len(nc.violations)} violations)", file=out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _render_options(args) -> RenderOptions:
    vp = args.viewport.split(",")
    size = args.size.split(",")
    if len(vp) != 4 or len(size) != 2:
        raise UsageError("--viewport needs 4 numbers and --size needs 2")
    try:
        bounds = [parse_rational(v) for v in vp]
        w, h = (int(s) for s in size)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        return RenderOptions(*bounds, width=w, height=h, density=args.density,
                             label_points=args.labels, mark_infinity=args.mark_infinity)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_render(args, out) -> int:
    opts = _render_options(args)
    cert = _read_certificate(args.path)
    report = verify_certificate(cert, analyze=False)
    if not report.ok:
        print(f"refusing to render: {report.first_failure}", file=sys.stderr)
        return EXIT_VERIFY
    svg = render_svg(replay(cert), opts)
    _write(args.out, svg.encode("utf-8"), out)
    return EXIT_OK


def _creation_step(cert: Certificate, div: Divisor, claim) -> int:
    if isinstance(claim, RationalClaim):
        for k, st in enumerate(cert.steps):
            if isinstance(st, (LineStep, CurveStep)) and any(r.index == claim.record for r in st.derived):
                return k
        return 0
    if isinstance(claim, AlgebraicClaim):
        form = div.curves[claim.curve]
    else:
        form = claim.form
    for k, st in enumerate(cert.steps):
        if isinstance(st, CurveStep) and st.form == form:
            return k
        if isinstance(st, LineStep) and form.degree == 1 and st.line == form.as_line():
            return k
    return 0  # pragma: no cover


def certificate_stats(cert: Certificate) -> dict:
    """Per-claim height and the steps since the previous claim became true."""
    div = replay(cert)
    rows = []
    done = 0
    for i, claim in enumerate(cert.claims):
        k = _creation_step(cert, div, claim)
        window = cert.steps[done + 1 : k + 1] if k > done else ()
        if isinstance(claim, RationalClaim):
            target, height = str(claim.point), claim.point.height
        elif isinstance(claim, AlgebraicClaim):
            target = f"root of {claim.minpoly} in [{claim.interval[0]}, {claim.interval[1]}]"
            height = max(max(abs(c.numerator), c.denominator) for c in claim.minpoly.coeffs)
        else:
            target = str(claim.form)
            height = max(abs(c) for _, c in claim.form.terms)
        rows.append(
            {
                "claim": i,
                "target": target,
                "height": height,
                "lines_added": sum(isinstance(s, LineStep) for s in window),
                "curves_added": sum(isinstance(s, CurveStep) for s in window),
                "steps": len(window),
            }
        )
        done = max(done, k)
    return {
        "claims": rows,
        "lines": len(div.lines),
        "curves": len(div.curves),
        "singular_points": len(div.singular_points),
        "trace_length": len(cert.steps),
    }


def cmd_stats(args, out) -> int:
    cert = _read_certificate(args.path)
    s = certificate_stats(cert)
    if args.json:
        print(_dump(s), file=out)
        return EXIT_OK
    for r in s["claims"]:
        print(
            f"claim {r['claim']} {r['target']}: height {r['height']}, lines {r['lines_added']}, "
            f"curves {r['curves_added']}, steps {r['steps']}",
            file=out,
        )
    print(
        f"total: {s['lines']} lines, {s['curves']} curves, {s['singular_points']} singular points, "
        f"{s['trace_length']} steps",
        file=out,
    )
    return EXIT_OK


def cmd_oracle_check(args, out) -> int:
    div = replay(_read_certificate(args.path))
    oracle = compare_with_oracle(div)
    audit = bezout_audit(div)
    nc = normal_crossings_report(div)
    bad = [e for e in audit if not e.ok]
    ok = oracle.ok and not bad
    if args.json:
        print(
            _dump(
                {
                    "ok": ok,
                    "oracle": {
                        "ok": oracle.ok,
                        "missing": [str(p) for p in oracle.missing],
                        "extra": [str(p) for p in oracle.extra],
                        "count_mismatch": [[str(p), a, b] for p, a, b in oracle.count_mismatch],
                    },
                    "bezout": {"pairs": len(audit), "failures": [list(e.pair) for e in bad]},
                    "normal_crossings": nc.as_dict(),
                }
            ),
            file=out,
        )
    else:
        print(f"singular locus oracle: {'agrees' if oracle.ok else 'DISAGREES'}", file=out)
        print(f"bezout audit: {len(audit) - len(bad)}/{len(audit)} pairs balanced", file=out)
        kinds: dict[str, int] = {}
        for v in nc.violations:
            kinds[v.kind] = kinds.get(v.kind, 0) + 1
        detail = ", ".join(f"{k} {n}" for k, n in sorted(kinds.items())) or "none"
        print(f"normal crossings: {'yes' if nc.nc else 'no'} (violations: {detail})", file=out)
        for u in nc.unchecked:
            print(f"unchecked: {u}", file=out)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "construct": cmd_construct,
    "embed-algebraic": cmd_embed_algebraic,
    "embed-curve": cmd_embed_curve,
    "verify": cmd_verify,
    "render": cmd_render,
    "stats": cmd_stats,
    "oracle-check": cmd_oracle_check,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"ParseError: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (RigidError, ValueError) as e:
        if hasattr(e, "step") or hasattr(e, "claim"):
            print(f"{type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_VERIFY
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
