"""Exception hierarchy.

Every error carries a ``details`` mapping so the CLI can emit it as JSON.
"""

from __future__ import annotations

from typing import Any


class KGraphError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str = "", **details: Any) -> None:
        super().__init__(message or self.__class__.__name__)
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        from .core import label

        return {
            "error": self.__class__.__name__,
            "message": str(self),
            "details": {k: _jsonable(v, label) for k, v in sorted(self.details.items())},
        }


def _jsonable(value: Any, label) -> Any:
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, list):
        return [_jsonable(v, label) for v in value]
    return label(value)


# -- presentation / k-graph core --------------------------------------------

class InvalidPresentation(KGraphError):
    pass


class DuplicateEdgeId(InvalidPresentation):
    pass


class EndpointMismatch(InvalidPresentation):
    pass


class MissingSquare(InvalidPresentation):
    pass


class NonBijectiveSquares(InvalidPresentation):
    pass


class CubeViolation(InvalidPresentation):
    pass


class FactorisationFailure(InvalidPresentation):
    pass


class DegreeOutOfRange(KGraphError):
    pass


class RankMismatch(KGraphError):
    pass


class EnumerationLimit(KGraphError):
    pass


# -- groups and cocycles ----------------------------------------------------

class GroupAxiomError(KGraphError):
    pass


class GroupTooLarge(KGraphError):
    pass


class NotAHomomorphism(KGraphError):
    pass


class SurjectivityFailure(KGraphError):
    pass


class SquareIncompatible(KGraphError):
    pass


class MissingLabel(KGraphError):
    pass


class GraphMismatch(KGraphError):
    pass


class ChainIncompatible(KGraphError):
    pass


class LevelMismatch(KGraphError):
    pass


class IndexOutOfRange(KGraphError):
    pass


# -- coverings, towers, projective limits -----------------------------------

class CoveringError(KGraphError):
    pass


class NotSurjective(CoveringError):
    pass


class NotFunctorial(CoveringError):
    pass


class NotLocallyInjective(CoveringError):
    pass


class NotLocallySurjective(CoveringError):
    pass


class SquareNotPreserved(CoveringError):
    pass


class ChainMismatch(KGraphError):
    pass


class LevelOutOfRange(KGraphError):
    pass


class IncompatibleTuple(KGraphError):
    pass


# -- analysis ---------------------------------------------------------------

class HasSources(KGraphError):
    pass


class TripleNotPeriodic(KGraphError):
    pass


class LevelTooShallow(KGraphError):
    pass


class InsufficientDepth(KGraphError):
    pass


# -- input files ------------------------------------------------------------

class SpecError(KGraphError):
    pass
