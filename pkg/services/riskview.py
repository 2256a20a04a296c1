"""
Risk matrix population and baseline-versus-enhanced assessment diffs.

Scenarios are matched across models by allocation id only.
"""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict

from services.errors import ScaleMismatchError
from services.model import IntoleranceLevel, Model, ScoringSystem, ThreatAllocation
from services.scoring import check_ranks, classify, generate_cells, risk_index
from services.validation import Problem, Severity, sort_problems
from utils.ordering import natural_key, natural_sorted


class MatrixEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    intolerance: IntoleranceLevel
    allocations: tuple[str, ...] = ()


class PopulatedMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    scoring: ScoringSystem
    cells: dict[tuple[int, int], MatrixEntry]

    def entry(self, fi: int, si: int) -> MatrixEntry:
        return self.cells[(fi, si)]

    @property
    def allocation_count(self) -> int:
        return sum(len(entry.allocations) for entry in self.cells.values())


class AllocationDelta(BaseModel):
    model_config = ConfigDict(frozen=True)

    allocation: str
    fi_before: int
    fi_after: int
    si_before: int
    si_after: int
    ri_before: int
    ri_after: int


class DiffReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    matched: tuple[AllocationDelta, ...] = ()
    added: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()
    findings: tuple[Problem, ...] = ()


def _check_allocation(scoring: ScoringSystem, allocation: ThreatAllocation) -> None:
    check_ranks(scoring, allocation.fi, allocation.si, allocation.id)


def build_matrix(model: Model) -> PopulatedMatrix:
    """
    Place every allocation in its (fi, si) cell.

    Raises:
        ScoreRangeError: naming the first allocation scored outside the scales
    """
    scoring = model.scoring
    levels = generate_cells(scoring)
    placed: dict[tuple[int, int], list[str]] = {key: [] for key in levels}
    for allocation in model.threat_allocations:
        _check_allocation(scoring, allocation)
        placed[(allocation.fi, allocation.si)].append(allocation.id)
    cells = {
        key: MatrixEntry(intolerance=levels[key], allocations=tuple(natural_sorted(ids)))
        for key, ids in placed.items()
    }
    return PopulatedMatrix(scoring=scoring, cells=cells)


def high_risk(model: Model) -> list[str]:
    """Allocations classified High, by descending RI then id."""
    scoring = model.scoring
    flagged = []
    for allocation in model.threat_allocations:
        _check_allocation(scoring, allocation)
        if classify(scoring, allocation.fi, allocation.si) is IntoleranceLevel.HIGH:
            flagged.append(allocation)
    flagged.sort(key=lambda a: (-risk_index(a.fi, a.si), natural_key(a.id)))
    return [allocation.id for allocation in flagged]


def _same_scales(first: ScoringSystem, second: ScoringSystem) -> bool:
    return (
        [level.rank for level in first.likelihood] == [level.rank for level in second.likelihood]
        and [level.rank for level in first.impact] == [level.rank for level in second.impact]
    )


def diff(baseline: Model, enhanced: Model) -> DiffReport:
    """
    Compare the scenario scores of a baseline and an enhanced assessment.

    Enhancements are expected to lower likelihood only, so any SI change and
    any FI increase is reported, as is a rescored or new scenario that is still
    classified High.

    Raises:
        ScaleMismatchError: the models' scoring scales differ
    """
    if not _same_scales(baseline.scoring, enhanced.scoring):
        raise ScaleMismatchError(
            f"scoring scales differ: {len(baseline.scoring.likelihood)}x{len(baseline.scoring.impact)} "
            f"vs {len(enhanced.scoring.likelihood)}x{len(enhanced.scoring.impact)}"
        )
    before = {a.id: a for a in baseline.threat_allocations}
    after = {a.id: a for a in enhanced.threat_allocations}

    matched = []
    findings = []
    for allocation_id in natural_sorted(before.keys() & after.keys()):
        old, new = before[allocation_id], after[allocation_id]
        delta = AllocationDelta(
            allocation=allocation_id,
            fi_before=old.fi,
            fi_after=new.fi,
            si_before=old.si,
            si_after=new.si,
            ri_before=risk_index(old.fi, old.si),
            ri_after=risk_index(new.fi, new.si),
        )
        matched.append(delta)
        if delta.si_before != delta.si_after:
            findings.append(Problem(
                rule="D-SI-CHANGED", severity=Severity.WARNING, elements=(allocation_id,),
                message=f"SI of '{allocation_id}' changed from {old.si} to {new.si}; enhancements are expected to affect FI only",
            ))
        if delta.fi_after > delta.fi_before:
            findings.append(Problem(
                rule="D-FI-INCREASED", severity=Severity.WARNING, elements=(allocation_id,),
                message=f"FI of '{allocation_id}' increased from {old.fi} to {new.fi}",
            ))

    added = natural_sorted(after.keys() - before.keys())
    removed = natural_sorted(before.keys() - after.keys())

    for allocation in enhanced.threat_allocations:
        _check_allocation(enhanced.scoring, allocation)
        old = before.get(allocation.id)
        rescored = old is None or (old.fi, old.si) != (allocation.fi, allocation.si)
        if rescored and classify(enhanced.scoring, allocation.fi, allocation.si) is IntoleranceLevel.HIGH:
            findings.append(Problem(
                rule="D-STILL-HIGH", severity=Severity.WARNING, elements=(allocation.id,),
                message=f"'{allocation.id}' is still High (RI {risk_index(allocation.fi, allocation.si)}) after enhancement",
            ))

    return DiffReport(
        matched=tuple(matched),
        added=tuple(added),
        removed=tuple(removed),
        findings=tuple(sort_problems(findings)),
    )
