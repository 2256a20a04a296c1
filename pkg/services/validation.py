"""
Consistency rules over an assessment model.

Rule ids are part of the public contract: scripts filter on them. Structural
breakage is an Error, numeric contradiction a Warning, design-completeness
hints are Info.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable, Iterator

import structlog
from pydantic import BaseModel, ConfigDict

from services.errors import AssessmentError
from services.hierarchy import PathStatus, check_conveyance_path, is_within
from services.model import KIND_NAMES, AllocationStatus, Component, Control, Model
from services.scoring import risk_index
from utils.ordering import natural_key

logger = structlog.get_logger(__name__)


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"


class Problem(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: str
    severity: Severity
    elements: tuple[str, ...]
    message: str


def sort_problems(problems: Iterable[Problem]) -> list[Problem]:
    return sorted(
        problems,
        key=lambda p: (p.rule, natural_key(p.elements[0]) if p.elements else (), p.message),
    )


Rule = Callable[[Model], Iterator[Problem]]
RULES: dict[str, Rule] = {}


def rule(rule_id: str, severity: Severity) -> Callable:
    def register(check: Callable[[Model], Iterator[tuple[tuple[str, ...], str]]]) -> Rule:
        def run(model: Model) -> Iterator[Problem]:
            for elements, message in check(model):
                yield Problem(rule=rule_id, severity=severity, elements=elements, message=message)

        run.__name__ = check.__name__
        RULES[rule_id] = run
        return run

    return register


@rule("E-DUP-ID", Severity.ERROR)
def _duplicate_ids(model: Model):
    for element_id in model.duplicate_ids:
        yield (element_id,), f"id '{element_id}' is declared more than once"


@rule("E-REF", Severity.ERROR)
def _dangling_references(model: Model):
    for ref in model.iter_references():
        if not model.has(ref.target, ref.kind):
            yield (ref.owner,), f"'{ref.owner}' references unknown {KIND_NAMES[ref.kind]} '{ref.target}'"


@rule("E-SCORE", Severity.ERROR)
def _scores_out_of_range(model: Model):
    scoring = model.scoring
    for allocation in model.threat_allocations:
        issues = []
        if allocation.fi not in scoring.likelihood_ranks:
            issues.append(f"fi {allocation.fi} outside likelihood scale 1..{len(scoring.likelihood)}")
        if allocation.si not in scoring.impact_ranks:
            issues.append(f"si {allocation.si} outside impact scale 1..{len(scoring.impact)}")
        if issues:
            yield (allocation.id,), "; ".join(issues)


@rule("E-LINK-SELF", Severity.ERROR)
def _self_links(model: Model):
    for link in model.links:
        if link.a == link.b:
            yield (link.id,), f"link '{link.id}' connects '{link.a}' to itself"


@rule("E-FLOW-SELF", Severity.ERROR)
def _self_flows(model: Model):
    for flow in model.data_flows:
        if flow.source == flow.destination:
            yield (flow.id,), f"data flow '{flow.id}' has the same source and destination '{flow.source}'"


@rule("E-FLOW-PATH", Severity.ERROR)
def _broken_conveyance(model: Model):
    for flow in model.data_flows:
        if not flow.conveyed_by:
            continue
        try:
            verdict = check_conveyance_path(model, flow)
        except AssessmentError:
            # unresolved links are reported by E-REF
            continue
        if verdict.status is PathStatus.INVALID:
            yield (flow.id,), f"data flow '{flow.id}' has an invalid conveying path: {verdict.reason}"


@rule("I-FLOW-UNCONVEYED", Severity.INFO)
def _unconveyed_flows(model: Model):
    for flow in model.data_flows:
        if not flow.conveyed_by:
            yield (flow.id,), f"no link is specified as conveying data flow '{flow.id}'"


@rule("W-RI-MISMATCH", Severity.WARNING)
def _reported_ri_mismatch(model: Model):
    for allocation in model.threat_allocations:
        if allocation.reported_ri is None:
            continue
        computed = risk_index(allocation.fi, allocation.si)
        if allocation.reported_ri != computed:
            yield (allocation.id,), (
                f"reported RI {allocation.reported_ri} differs from computed RI {computed} "
                f"(FI {allocation.fi} + SI {allocation.si})"
            )


@rule("I-ACCEPTED-NO-MIT", Severity.INFO)
def _accepted_without_mitigation(model: Model):
    for allocation in model.threat_allocations:
        if allocation.status is AllocationStatus.ACCEPTED and not allocation.mitigated_by:
            yield (allocation.id,), f"scenario '{allocation.id}' is accepted but has no mitigation designed"


def _covers(model: Model, control: Control, component_id: str) -> bool:
    return any(
        model.has(target, Component) and is_within(model, component_id, target)
        for target in control.allocated_to
    )


@rule("I-MIT-AVAILABLE", Severity.INFO)
def _available_mitigations(model: Model):
    for allocation in model.threat_allocations:
        if not model.has(allocation.component, Component):
            continue
        for control in model.controls:
            if control.id in allocation.mitigated_by or allocation.threat not in control.mitigates_threats:
                continue
            if _covers(model, control, allocation.component):
                yield (allocation.id, control.id), (
                    f"control '{control.id}' mitigates threat '{allocation.threat}' on component "
                    f"'{allocation.component}' but is not attributed to scenario '{allocation.id}'"
                )


@rule("W-MIT-THREAT-MISMATCH", Severity.WARNING)
def _mitigation_threat_mismatch(model: Model):
    for allocation in model.threat_allocations:
        for control_id in allocation.mitigated_by:
            if not model.has(control_id, Control):
                continue
            if allocation.threat not in model.control(control_id).mitigates_threats:
                yield (allocation.id, control_id), (
                    f"control '{control_id}' does not list threat '{allocation.threat}' "
                    f"mitigated in scenario '{allocation.id}'"
                )


def validate(model: Model, rules: Iterable[str] | None = None) -> list[Problem]:
    """
    Run the rule catalog over ``model``.

    Returns every finding ordered by rule id then first element id; an empty
    list for a fully consistent model.
    """
    selected = RULES if rules is None else {rule_id: RULES[rule_id] for rule_id in rules}
    problems = sort_problems(p for check in selected.values() for p in check(model))
    logger.debug("validation.completed", model=model.name, problems=len(problems))
    return problems

