"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class RigidError(Exception):
    """Base class for all errors raised by rigidplane."""


# -- exact core ---------------------------------------------------------------


class ZeroVector(RigidError, ValueError):
    pass


class EqualPoints(RigidError, ValueError):
    pass


class EqualLines(RigidError, ValueError):
    pass


class ComponentContained(RigidError, ValueError):
    """A form vanishes identically on the line it is being restricted to."""


class NotSquarefree(RigidError, ValueError):
    pass


class NoSignChange(RigidError, ValueError):
    pass


# -- construction engine ------------------------------------------------------


class ConstructionError(RigidError):
    pass


class DuplicateLine(ConstructionError, ValueError):
    pass


class DuplicateComponent(ConstructionError, ValueError):
    pass


class EqualAnchors(ConstructionError, ValueError):
    pass


class AnchorOutOfRange(ConstructionError, IndexError):
    pass


class AnchorNotSingular(ConstructionError, ValueError):
    """A point used as an anchor is not a recorded singular point."""


class AnchorNotOnCurve(ConstructionError, ValueError):
    pass


class BadAnchorShape(ConstructionError, ValueError):
    pass


class BadAnchorCount(ConstructionError, ValueError):
    pass


class UniquenessFailure(ConstructionError, ValueError):
    pass


class NoCurve(UniquenessFailure):
    """No form of the requested degree passes through the points."""


class NotUnique(UniquenessFailure):
    """A pencil (or larger system) of forms passes through the points."""


class PointNotOnCurve(ConstructionError, ValueError):
    pass


class DuplicatePoints(ConstructionError, ValueError):
    pass


class NotMonic(ConstructionError, ValueError):
    pass


class RootNotIsolated(ConstructionError, ValueError):
    pass


# -- verification -------------------------------------------------------------


class ParseError(RigidError, ValueError):
    """Malformed certificate input. ``position`` is a JSON path or a character offset."""

    def __init__(self, reason: str, position: str | int | None = None):
        self.reason = reason
        self.position = position
        where = "" if position is None else f" at {position}"
        super().__init__(f"{reason}{where}")


class SharedComponent(RigidError, ValueError):
    pass


class VerificationFailure(RigidError):
    """A failed certificate check; carried inside reports and raised on demand."""


class StepMismatch(VerificationFailure):
    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"step {step}: {reason}")


class ClaimFailed(VerificationFailure):
    def __init__(self, claim: int, reason: str):
        self.claim = claim
        self.reason = reason
        super().__init__(f"claim {claim}: {reason}")


# -- command line -------------------------------------------------------------


class LiteralError(RigidError, ValueError):
    """A point, polynomial or interval literal failed to parse."""

    def __init__(self, reason: str, text: str, position: int):
        self.reason = reason
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")
