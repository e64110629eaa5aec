"""
Error types raised by the lifting toolkit.
"""
from typing import Any, Optional


class LiftingError(Exception):
    """Base class for every error the library raises."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        """Serializable summary used by the CLI reports."""
        data = {"error": type(self).__name__, "message": self.message}
        if self.witness is not None:
            data["witness"] = str(self.witness)
        return data


# Ring and linear algebra

class NotAUnit(LiftingError):
    pass


class DimensionMismatch(LiftingError):
    pass


class NoSolution(LiftingError):
    pass


class RingMismatch(LiftingError):
    pass


# Algebras and modules

class AlgebraMismatch(LiftingError):
    pass


class LeibnizViolation(LiftingError):
    pass


class SquareNonzero(LiftingError):
    pass


class BlockEquationViolation(LiftingError):
    """A block module candidate breaks one of its structure equations."""


class ShapeError(LiftingError):
    pass


class WindowTooWide(LiftingError):
    pass


class WindowExhausted(LiftingError):
    pass


# Homomorphisms

class NotACycle(LiftingError):
    pass


class NotAnIso(LiftingError):
    pass


class MathematicalObstruction(LiftingError):
    """Failures that are answers rather than misuse; the CLI exits with 2 on these."""


class NotNullHomotopic(MathematicalObstruction):
    pass


class ObstructionNonzero(MathematicalObstruction):
    """A lifting stage whose degree -2 cycle has no null-homotopy."""

    def __init__(self, stage: int, witness: Any = None, message: Optional[str] = None,
                 variable: Optional[int] = None, transcript: Optional[list] = None):
        where = f"stage {stage}" if variable is None else f"variable {variable}, stage {stage}"
        super().__init__(message or f"Lifting obstructed at {where}", witness)
        self.stage = stage
        self.variable = variable
        self.transcript = transcript or []

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["stage"] = self.stage
        if self.variable is not None:
            data["variable"] = self.variable
        return data


class Ext1Obstruction(MathematicalObstruction):
    """A uniqueness stage whose degree -1 cycle has no null-homotopy."""

    def __init__(self, stage: int, witness: Any = None, message: Optional[str] = None):
        super().__init__(message or f"Uniqueness obstructed at stage {stage}", witness)
        self.stage = stage

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["stage"] = self.stage
        return data


# Input

class ProblemFileError(LiftingError):
    """Malformed problem file; `witness` holds the offending path."""
