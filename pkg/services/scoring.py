"""Risk index arithmetic and intolerance classification."""
from __future__ import annotations

from services.errors import ScoreRangeError
from services.model import Intolerance, IntoleranceLevel, MatrixCell, ScoringSystem


def risk_index(fi: int, si: int) -> int:
    """Integrated risk index of a (likelihood, impact) pairing: RI = FI + SI."""
    return fi + si


def check_ranks(scoring: ScoringSystem, fi: int, si: int, allocation: str | None = None) -> None:
    if fi not in scoring.likelihood_ranks:
        raise ScoreRangeError("likelihood", fi, len(scoring.likelihood), allocation)
    if si not in scoring.impact_ranks:
        raise ScoreRangeError("impact", si, len(scoring.impact), allocation)


def _threshold_level(scoring: ScoringSystem, ri: int) -> IntoleranceLevel:
    if ri <= scoring.low_max:
        return IntoleranceLevel.LOW
    if ri >= scoring.high_min:
        return IntoleranceLevel.HIGH
    return IntoleranceLevel.MEDIUM


def classify(scoring: ScoringSystem, fi: int, si: int) -> IntoleranceLevel:
    """
    Intolerance of a scored pairing.

    An explicit cell map on the scoring system wins; otherwise the level is
    derived from the risk index and the low/high thresholds.

    Raises:
        ScoreRangeError: fi or si outside its scale
    """
    check_ranks(scoring, fi, si)
    cells = scoring.cells
    if cells is not None:
        return cells[(fi, si)]
    return _threshold_level(scoring, risk_index(fi, si))


def generate_cells(scoring: ScoringSystem) -> dict[tuple[int, int], IntoleranceLevel]:
    return {
        (fi, si): classify(scoring, fi, si)
        for fi in scoring.likelihood_ranks
        for si in scoring.impact_ranks
    }


def with_generated_cells(scoring: ScoringSystem) -> ScoringSystem:
    """The same scoring system with its cell map written out explicitly."""
    cells = tuple(
        MatrixCell(likelihood=fi, impact=si, level=level)
        for (fi, si), level in generate_cells(scoring).items()
    )
    intolerance = Intolerance(low_max=scoring.low_max, high_min=scoring.high_min, cells=cells)
    return ScoringSystem(likelihood=scoring.likelihood, impact=scoring.impact, intolerance=intolerance)
