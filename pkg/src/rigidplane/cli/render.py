"""Deterministic SVG pictures of a divisor in the affine chart z = 1.

All geometry is computed with fractions. Line segments are clipped to the
viewport exactly; curves are sampled column by column, each sample being a
root of ``F(x, y, 1)`` isolated by Sturm sequences and bisected to below a
pixel. Conversion to decimals happens only when the SVG text is written.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from rigidplane.core.forms import HomForm
from rigidplane.core.projective import ProjLine, ProjPoint
from rigidplane.core.upoly import UniPoly, refine_root, squarefree_part, sturm_isolate


@dataclass(frozen=True)
class RenderOptions:
    x_min: Fraction = Fraction(-5)
    x_max: Fraction = Fraction(5)
    y_min: Fraction = Fraction(-5)
    y_max: Fraction = Fraction(5)
    width: int = 600
    height: int = 600
    density: int = 200  # curve sample columns across the viewport
    label_points: bool = False
    mark_infinity: bool = False

    def __post_init__(self):
        for name in ("x_min", "x_max", "y_min", "y_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("viewport must have x_min < x_max and y_min < y_max")
        if self.width < 1 or self.height < 1:
            raise ValueError("image size must be positive")
        if self.density < 2:
            raise ValueError("sampling density must be at least 2")


def _dec(x: Fraction) -> str:
    # three decimals, rounded half away from zero, from the exact value
    scaled = abs(x) * 1000
    n = int(scaled + Fraction(1, 2))
    sign = "-" if x < 0 and n else ""
    return f"{sign}{n // 1000}.{n % 1000:03d}"


class _Canvas:
    def __init__(self, opts: RenderOptions):
        self.o = opts
        self.sx = Fraction(opts.width) / (opts.x_max - opts.x_min)
        self.sy = Fraction(opts.height) / (opts.y_max - opts.y_min)

    def xy(self, x: Fraction, y: Fraction) -> tuple[str, str]:
        return _dec((x - self.o.x_min) * self.sx), _dec((self.o.y_max - y) * self.sy)


def clip_line(l: ProjLine, o: RenderOptions) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None:
    """Exact endpoints of the affine line ``a x + b y + c = 0`` inside the viewport."""
    a, b, c = l
    if a == 0 and b == 0:
        return None
    pts = set()
    if b:
        for x in (o.x_min, o.x_max):
            y = Fraction(-a * x - c, 1) / b
            if o.y_min <= y <= o.y_max:
                pts.add((x, y))
    if a:
        for y in (o.y_min, o.y_max):
            x = Fraction(-b * y - c, 1) / a
            if o.x_min <= x <= o.x_max:
                pts.add((x, y))
    if len(pts) < 2:
        return None
    ordered = sorted(pts)
    return ordered[0], ordered[-1]


def _column_poly(form: HomForm, x: Fraction) -> UniPoly:
    coeffs: dict[int, Fraction] = {}
    for (i, j, k), c in form.terms:
        coeffs[j] = coeffs.get(j, 0) + c * x**i
    top = max(coeffs, default=0)
    return UniPoly([coeffs.get(k, 0) for k in range(top + 1)])


def curve_samples(form: HomForm, o: RenderOptions) -> list[tuple[Fraction, list[Fraction]]]:
    """For each sample abscissa, the sorted roots ``y`` of ``F(x, y, 1)`` in the viewport."""
    tol = (o.y_max - o.y_min) / (4 * o.height)
    out = []
    for i in range(o.density + 1):
        x = o.x_min + (o.x_max - o.x_min) * Fraction(i, o.density)
        g = _column_poly(form, x)
        if g.degree < 1:
            out.append((x, []))
            continue
        g = squarefree_part(g)
        ys = []
        for iv in sturm_isolate(g):
            if iv.hi <= o.y_min or iv.lo >= o.y_max:
                continue
            r = refine_root(g, iv, tol)
            y = (r.lo + r.hi) / 2
            if o.y_min <= y <= o.y_max:
                ys.append(y)
        out.append((x, ys))
    return out


def _polylines(samples) -> list[list[tuple[Fraction, Fraction]]]:
    # join the k-th root of neighbouring columns while the root count is stable
    lines, open_ = [], []
    prev_count = None
    for x, ys in samples:
        if len(ys) != prev_count:
            lines.extend(p for p in open_ if len(p) > 1)
            open_ = [[(x, y)] for y in ys]
        else:
            for poly, y in zip(open_, ys):
                poly.append((x, y))
        prev_count = len(ys)
    lines.extend(p for p in open_ if len(p) > 1)
    return lines


def _boundary_mark(p: ProjPoint, o: RenderOptions) -> tuple[Fraction, Fraction]:
    # where the ray from the viewport centre in direction (x, y) leaves the box
    cx, cy = (o.x_min + o.x_max) / 2, (o.y_min + o.y_max) / 2
    hx, hy = (o.x_max - o.x_min) / 2, (o.y_max - o.y_min) / 2
    dx, dy = Fraction(p.x), Fraction(p.y)
    ts = []
    if dx:
        ts.append(hx / abs(dx))
    if dy:
        ts.append(hy / abs(dy))
    t = min(ts)
    return cx + t * dx, cy + t * dy


def render_svg(div, opts: RenderOptions = RenderOptions()) -> str:
    """SVG 1.1 text for the lines, curves and singular records of ``div``."""
    cv = _Canvas(opts)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{opts.width}" '
        f'height="{opts.height}" viewBox="0 0 {opts.width} {opts.height}">',
        f'<rect x="0" y="0" width="{opts.width}" height="{opts.height}" fill="white"/>',
        '<g id="lines" stroke="black" stroke-width="1" fill="none">',
    ]
    for i, l in enumerate(div.lines):
        seg = clip_line(l, opts)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        a, b = cv.xy(x1, y1)
        c, d = cv.xy(x2, y2)
        out.append(f'<line id="L{i}" x1="{a}" y1="{b}" x2="{c}" y2="{d}"/>')
    out.append("</g>")
    out.append('<g id="curves" stroke="blue" stroke-width="1.5" fill="none">')
    for j, f in enumerate(div.curves):
        for k, poly in enumerate(_polylines(curve_samples(f, opts))):
            pts = " ".join(",".join(cv.xy(x, y)) for x, y in poly)
            out.append(f'<polyline id="C{j}-{k}" points="{pts}"/>')
    out.append("</g>")
    out.append('<g id="points" fill="red" stroke="none">')
    for r, rec in enumerate(div.singular_points):
        p = rec.point
        if p.z == 0:
            if not opts.mark_infinity:
                continue
            x, y = _boundary_mark(p, opts)
            a, b = cv.xy(x, y)
            out.append(f'<rect id="P{r}" x="{a}" y="{b}" width="6" height="6" transform="translate(-3,-3)"/>')
            continue
        x, y = p.affine()
        if not (opts.x_min <= x <= opts.x_max and opts.y_min <= y <= opts.y_max):
            continue
        a, b = cv.xy(x, y)
        out.append(f'<circle id="P{r}" cx="{a}" cy="{b}" r="3"/>')
        if opts.label_points:
            out.append(f'<text x="{a}" y="{b}" dx="4" dy="-4" font-size="9" fill="black">{p}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
