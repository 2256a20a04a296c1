# Exceptions raised by the assessment engine
from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from services.model_io import ParseError


class AssessmentError(Exception):
    """Base class for every error the engine raises on purpose."""


class ModelReferenceError(AssessmentError, KeyError):
    """An id does not resolve to an element of the expected kind."""

    def __init__(self, element_id: str, kind: str = "element"):
        self.element_id = element_id
        self.kind = kind
        super().__init__(f"unknown {kind} '{element_id}'")

    def __str__(self) -> str:
        # KeyError quotes its argument otherwise
        return self.args[0]


class ScoreRangeError(AssessmentError, ValueError):
    def __init__(self, scale: str, rank: int, maximum: int, allocation: str | None = None):
        self.scale = scale
        self.rank = rank
        self.maximum = maximum
        self.allocation = allocation
        where = f"allocation '{allocation}': " if allocation else ""
        super().__init__(f"{where}{scale} rank {rank} outside 1..{maximum}")


class ScaleMismatchError(AssessmentError, ValueError):
    """Baseline and enhanced models do not share their scoring scales."""


class ModelLoadError(AssessmentError):
    """A model document could not be loaded; carries every independent problem found."""

    def __init__(self, errors: Sequence["ParseError"]):
        self.errors = list(errors)
        count = len(self.errors)
        first = f": {self.errors[0]}" if self.errors else ""
        super().__init__(f"{count} parse error{'s' if count != 1 else ''}{first}")
