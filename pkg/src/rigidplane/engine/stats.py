"""Size of a construction measured against the height of its targets."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from rigidplane.core.projective import ProjPoint
from rigidplane.engine.config import Config

TARGET_KINDS = ("point", "embed_algebraic", "embed_curve")


def height(p) -> int:
    """Largest absolute value among the primitive integer coordinates."""
    return ProjPoint.of(*p).height


@dataclass
class TargetStats:
    target: object
    height: int | None
    lines_added: int = 0
    curves_added: int = 0
    steps: int = 0
    gadgets: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "target": str(self.target),
            "height": self.height,
            "lines_added": self.lines_added,
            "curves_added": self.curves_added,
            "steps": self.steps,
            "gadgets": dict(sorted(self.gadgets.items())),
        }


@dataclass
class StatsReport:
    targets: list[TargetStats]
    lines: int
    curves: int
    singular_points: int
    trace_length: int

    def as_dict(self) -> dict:
        return {
            "targets": [t.as_dict() for t in self.targets],
            "lines": self.lines,
            "curves": self.curves,
            "singular_points": self.singular_points,
            "trace_length": self.trace_length,
        }


def stats(cfg: Config, targets: Iterable = ()) -> StatsReport:
    """Per-target cost of ``cfg`` plus global counts.

    A target's cost is read from the most recent top-level construction
    logged for it; a target that was already present costs nothing.
    """
    events = cfg.events
    out = []
    for t in targets:
        if isinstance(t, ProjPoint) or (isinstance(t, tuple) and len(t) == 3):
            t = ProjPoint.of(*t)
            h = t.height
        else:
            h = None
        ts = TargetStats(t, h)
        idx = next(
            (i for i in range(len(events) - 1, -1, -1) if events[i].kind in TARGET_KINDS and events[i].target == t),
            None,
        )
        if idx is not None:
            ev = events[idx]
            ts.steps = ev.steps
            for k in range(ev.first_step, ev.last_step):
                kind = cfg.step_kind(k)
                ts.lines_added += kind == "line"
                ts.curves_added += kind == "curve"
            ts.gadgets = dict(Counter(e.kind for e in events[ev.first_event : idx]))
        out.append(ts)
    return StatsReport(out, cfg.num_lines, cfg.num_curves, cfg.num_points, cfg.num_steps)
