"""
Deterministic text emitters: DOT design diagrams, risk matrices, problem and diff reports.

Identical inputs give byte-identical output. Elements are emitted in natural
id order; layout is left to Graphviz.
"""
from __future__ import annotations

import html
import json
import re
from typing import Iterable, Literal, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict

from services.model import AllocationStatus, Component, IntoleranceLevel, LinkType, Model, Threat
from services.riskview import DiffReport, PopulatedMatrix
from services.scoring import classify
from services.validation import Problem
from utils.ordering import natural_key

MatrixFormat = Literal["text", "csv", "html"]
ReportFormat = Literal["text", "json"]

DOT_HEADER = (
    '  graph [compound=true, fontname="Helvetica", rankdir=LR];\n'
    '  node [fontname="Helvetica", shape=box];\n'
    '  edge [fontname="Helvetica", fontsize=10];\n'
)

ALLOCATION_EDGE_COLORS = {
    IntoleranceLevel.HIGH: "red",
    IntoleranceLevel.MEDIUM: "orange",
    IntoleranceLevel.LOW: "green",
}
MITIGATION_COLOR = "green"

_DIRECTIONS = {"bidirectional": "both", "a_to_b": "forward", "b_to_a": "back"}


class RenderOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    hide: tuple[str, ...] = ()
    show_threats: bool = False
    show_controls: bool = False


def graph_name(name: str) -> str:
    sanitized = re.sub(r"[^a-z0-9_]", "_", name.lower())
    if not sanitized:
        return "model"
    return f"m_{sanitized}" if sanitized[0].isdigit() else sanitized


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attrs(**attrs) -> str:
    parts = []
    for key, value in attrs.items():
        if value is None:
            continue
        parts.append(f"{key}={value if isinstance(value, (int, float)) else _quote(str(value))}")
    return "[" + ", ".join(parts) + "]"


def _by_id(elements: Iterable) -> list:
    return sorted(elements, key=lambda e: natural_key(e.id))


# "@" is outside the id alphabet
def _control_node(control_id: str, component_id: str) -> str:
    return f"{control_id}@{component_id}"


# =============================================================================
# DESIGN DIAGRAM
# =============================================================================

class _DiagramWriter:
    def __init__(self, model: Model, options: RenderOptions):
        self.model = model
        self.options = options
        self.hidden: set[str] = set()
        for component_id in options.hide:
            self.model.component(component_id)
            for component in self.model.iter_components():
                if component.id == component_id or component_id in self.model.ancestors(component.id):
                    self.hidden.add(component.id)
        self.lines: list[str] = []
        self.placements: dict[str, list[str]] = {}
        if options.show_controls:
            for control in _by_id(model.controls):
                for target in sorted(set(control.allocated_to), key=natural_key):
                    if target not in self.hidden and model.has(target, Component):
                        self.placements.setdefault(target, []).append(control.id)

    def visible(self, component_id: str) -> Optional[str]:
        """The component itself, or its nearest visible ancestor."""
        if not self.model.has(component_id, Component):
            return None
        for candidate in [component_id] + self.model.ancestors(component_id):
            if candidate not in self.hidden:
                return candidate
        return None

    def emit(self) -> str:
        model = self.model
        self.lines.append(f"digraph {graph_name(model.name)} {{\n")
        self.lines.append(DOT_HEADER)

        internal = [c for c in _by_id(model.components) if not c.external and c.id not in self.hidden]
        external = [c for c in _by_id(model.components) if c.external and c.id not in self.hidden]
        if internal:
            self.lines.append(f"  subgraph cluster__system {{\n    label={_quote(model.name)};\n")
            for component in internal:
                self._component(component, depth=2)
            self.lines.append("  }\n")
        for component in external:
            self._component(component, depth=1)

        threat_ids = self._shown_threats()
        for threat in _by_id(t for t in model.threats if t.id in threat_ids):
            self.lines.append(
                f"  {_quote(threat.id)} {_attrs(label=threat.name, shape='diamond', style='filled', fillcolor='mistyrose')};\n"
            )

        self._links()
        self._flows()
        if self.options.show_threats:
            self._allocations()
        if self.options.show_controls:
            self._mitigations(threat_ids)
        self._legend()
        self.lines.append("}\n")
        return "".join(self.lines)

    def _component(self, component: Component, depth: int) -> None:
        pad = "  " * depth
        self.lines.append(f"{pad}subgraph {_quote('cluster_' + component.id)} {{\n")
        self.lines.append(f"{pad}  label={_quote(component.name)};\n")
        # anchor node: edges attach here and are clipped to the cluster border
        self.lines.append(f"{pad}  {_quote(component.id)} {_attrs(label='', shape='point', style='invis')};\n")
        for control_id in self.placements.get(component.id, []):
            control = self.model.control(control_id)
            node = _control_node(control.id, component.id)
            self.lines.append(
                f"{pad}  {_quote(node)} {_attrs(label=control.name, shape='invhouse', color=MITIGATION_COLOR)};\n"
            )
        for child in _by_id(component.children):
            if child.id not in self.hidden:
                self._component(child, depth + 1)
        self.lines.append(f"{pad}}}\n")

    def _edge(self, tail: str, head: str, **attrs) -> None:
        self.lines.append(
            f"  {_quote(tail)} -> {_quote(head)} "
            f"{_attrs(ltail='cluster_' + tail, lhead='cluster_' + head, **attrs)};\n"
        )

    def _links(self) -> None:
        for link in _by_id(self.model.links):
            a, b = self.visible(link.a), self.visible(link.b)
            if a is None or b is None or a == b:
                continue
            link_type = self.model.get(link.type, LinkType) if self.model.has(link.type, LinkType) else None
            self._edge(
                a, b,
                color=getattr(link_type, "color", "black"),
                dir=_DIRECTIONS[link.directionality.value],
                label=getattr(link_type, "name", link.type),
            )

    def _flows(self) -> None:
        for flow in _by_id(self.model.data_flows):
            source, destination = self.visible(flow.source), self.visible(flow.destination)
            if source is None or destination is None or source == destination:
                continue
            count = len(flow.items)
            self._edge(source, destination, style="bold", penwidth=2, label=f"{count} item{'s' if count != 1 else ''}")

    def _shown_threats(self) -> set[str]:
        shown = set()
        if self.options.show_threats:
            shown.update(t.id for t in self.model.threats)
        if self.options.show_controls:
            for control_id in {c for controls in self.placements.values() for c in controls}:
                shown.update(self.model.control(control_id).mitigates_threats)
        return {t for t in shown if self.model.has(t, Threat)}

    def _allocations(self) -> None:
        scoring = self.model.scoring
        for allocation in _by_id(self.model.threat_allocations):
            target = self.visible(allocation.component)
            if target is None or not self.model.has(allocation.threat):
                continue
            if allocation.status is AllocationStatus.ACCEPTED:
                color = MITIGATION_COLOR
            else:
                color = ALLOCATION_EDGE_COLORS[classify(scoring, allocation.fi, allocation.si)]
            self.lines.append(
                f"  {_quote(allocation.threat)} -> {_quote(target)} "
                f"{_attrs(lhead='cluster_' + target, color=color, label=allocation.id)};\n"
            )

    def _mitigations(self, threat_ids: set[str]) -> None:
        for component_id in sorted(self.placements, key=natural_key):
            for control_id in self.placements[component_id]:
                for threat_id in sorted(self.model.control(control_id).mitigates_threats, key=natural_key):
                    if threat_id not in threat_ids:
                        continue
                    node = _control_node(control_id, component_id)
                    self.lines.append(
                        f"  {_quote(node)} -> {_quote(threat_id)} {_attrs(color=MITIGATION_COLOR, style='dashed')};\n"
                    )

    def _legend(self) -> None:
        if not self.model.link_types:
            return
        self.lines.append('  subgraph cluster__legend {\n    label="Link types";\n')
        for link_type in _by_id(self.model.link_types):
            node = f"legend@{link_type.id}"
            self.lines.append(
                f"    {_quote(node)} {_attrs(label=link_type.name, shape='plaintext', fontcolor=link_type.color)};\n"
            )
        self.lines.append("  }\n")


def emit_dot(model: Model, options: RenderOptions | None = None) -> str:
    """
    Graphviz DOT design diagram of ``model``.

    Components are nested clusters named ``cluster_<id>``; external components
    sit outside the system cluster. Threats, when shown, sit outside every
    cluster. Hidden components take their descendants with them; edges
    touching them move to the nearest visible ancestor.

    Raises:
        ModelReferenceError: a hidden id is not a declared component
    """
    return _DiagramWriter(model, options or RenderOptions()).emit()


# =============================================================================
# RISK MATRIX
# =============================================================================

def _cell_text(matrix: PopulatedMatrix, fi: int, si: int, label: str) -> str:
    entry = matrix.entry(fi, si)
    if not entry.allocations:
        return label
    return f"{label} {','.join(entry.allocations)}"


def _matrix_text(matrix: PopulatedMatrix) -> str:
    scoring = matrix.scoring
    rows = [["SI\\FI"] + [str(fi) for fi in scoring.likelihood_ranks]]
    for si in scoring.impact_ranks:
        rows.append([str(si)] + [
            _cell_text(matrix, fi, si, matrix.entry(fi, si).intolerance.letter)
            for fi in scoring.likelihood_ranks
        ])
    widths = [max(len(row[col]) for row in rows) for col in range(len(rows[0]))]
    return "".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() + "\n"
        for row in rows
    )


def _matrix_csv(matrix: PopulatedMatrix) -> str:
    scoring = matrix.scoring
    columns = ["SI\\FI"] + [str(fi) for fi in scoring.likelihood_ranks]
    records = [
        [str(si)] + [
            _cell_text(matrix, fi, si, matrix.entry(fi, si).intolerance.value)
            for fi in scoring.likelihood_ranks
        ]
        for si in scoring.impact_ranks
    ]
    return pd.DataFrame(records, columns=columns).to_csv(index=False, lineterminator="\n")


def _matrix_html(matrix: PopulatedMatrix) -> str:
    scoring = matrix.scoring
    lines = ['<table class="risk-matrix">\n', "  <tr><th>SI \\ FI</th>"]
    lines.extend(f"<th>{html.escape(level.name)} [{level.rank}]</th>" for level in scoring.likelihood)
    lines.append("</tr>\n")
    for impact in scoring.impact:
        lines.append(f"  <tr><th>{html.escape(impact.name)} [{impact.rank}]</th>")
        for fi in scoring.likelihood_ranks:
            entry = matrix.entry(fi, impact.rank)
            lines.append(
                f'<td style="background-color: {entry.intolerance.color}">'
                f"{html.escape(','.join(entry.allocations))}</td>"
            )
        lines.append("</tr>\n")
    lines.append("</table>\n")
    return "".join(lines)


def render_matrix(matrix: PopulatedMatrix, format: MatrixFormat = "text") -> str:
    """
    Impact rows ascend top to bottom, likelihood columns ascend left to right.

    Cells show the intolerance (text: L/M/H, csv: level name, html: background
    colour) followed by the allocation ids placed there.
    """
    renderers = {"text": _matrix_text, "csv": _matrix_csv, "html": _matrix_html}
    if format not in renderers:
        raise ValueError(f"unknown matrix format '{format}'")
    return renderers[format](matrix)


# =============================================================================
# REPORTS
# =============================================================================

def _problem_record(problem: Problem) -> dict:
    return {
        "elements": list(problem.elements),
        "message": problem.message,
        "rule": problem.rule,
        "severity": problem.severity.value,
    }


def problem_line(problem: Problem) -> str:
    return f"{problem.severity.value} {problem.rule} [{','.join(problem.elements)}] {problem.message}"


def render_problems(problems: Iterable[Problem], format: ReportFormat = "text") -> str:
    problems = list(problems)
    if format == "json":
        return json.dumps([_problem_record(p) for p in problems], indent=2, sort_keys=True) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format '{format}'")
    return "".join(problem_line(p) + "\n" for p in problems)


def render_diff(report: DiffReport, format: ReportFormat = "text") -> str:
    if format == "json":
        document = {
            "added": list(report.added),
            "findings": [_problem_record(p) for p in report.findings],
            "matched": [delta.model_dump() for delta in report.matched],
            "removed": list(report.removed),
        }
        return json.dumps(document, indent=2, sort_keys=True) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format '{format}'")
    lines = [
        f"matched {d.allocation}: FI {d.fi_before}->{d.fi_after}, SI {d.si_before}->{d.si_after}, "
        f"RI {d.ri_before}->{d.ri_after}"
        for d in report.matched
    ]
    lines.extend(f"added {allocation}" for allocation in report.added)
    lines.extend(f"removed {allocation}" for allocation in report.removed)
    lines.extend(problem_line(p) for p in report.findings)
    return "".join(line + "\n" for line in lines)
