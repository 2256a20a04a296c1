"""
Assessment metamodel.

Scoring scales, the component forest, links and data flows, attackers, threats,
controls and the scored threat allocations (risk scenarios). Every type is a
frozen pydantic model; a loaded ``Model`` is immutable and safe to share
between threads.

Cross-references are id strings. ``Model`` indexes every element once after
validation, so lookups and hierarchy queries never walk the whole document.
Referential integrity is enforced by ``services.model_io`` on load and
re-checked by ``services.validation``; a model built in code may hold
dangling references.
"""
from __future__ import annotations

from enum import Enum
from typing import Annotated, Iterator, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, StringConstraints, model_validator

from services.errors import ModelReferenceError

ElementId = Annotated[str, StringConstraints(pattern=r"^[a-z0-9-]+$")]


class _Element(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# =============================================================================
# SCORING
# =============================================================================

class IntoleranceLevel(str, Enum):
    """Risk intolerance band; ordered LOW < MEDIUM < HIGH through ``order``."""
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"

    @property
    def order(self) -> int:
        return _INTOLERANCE_ORDER[self]

    @property
    def color(self) -> str:
        return INTOLERANCE_COLORS[self]

    @property
    def letter(self) -> str:
        return self.value[0]


_INTOLERANCE_ORDER = {IntoleranceLevel.LOW: 0, IntoleranceLevel.MEDIUM: 1, IntoleranceLevel.HIGH: 2}

INTOLERANCE_COLORS = {
    IntoleranceLevel.LOW: "green",
    IntoleranceLevel.MEDIUM: "yellow",
    IntoleranceLevel.HIGH: "red",
}


class LikelihoodLevel(_Element):
    rank: int
    name: str = Field(min_length=1)


class ImpactLevel(_Element):
    rank: int
    name: str = Field(min_length=1)


class MatrixCell(_Element):
    likelihood: int
    impact: int
    level: IntoleranceLevel


class Intolerance(_Element):
    low_max: int = 4
    high_min: int = 8
    cells: Optional[tuple[MatrixCell, ...]] = None

    @model_validator(mode="after")
    def _thresholds_ordered(self) -> Intolerance:
        if self.low_max >= self.high_min:
            raise ValueError(f"low_max ({self.low_max}) must be below high_min ({self.high_min})")
        return self


def _check_scale(levels: tuple, scale: str) -> None:
    ranks = [level.rank for level in levels]
    if ranks != list(range(1, len(ranks) + 1)):
        raise ValueError(f"{scale} ranks must be 1..{len(ranks)} in order, got {ranks}")
    names = [level.name for level in levels]
    if len(set(names)) != len(names):
        raise ValueError(f"{scale} level names must be unique")


class ScoringSystem(_Element):
    """Ordinal likelihood (FI) and impact (SI) scales with intolerance thresholds."""

    likelihood: tuple[LikelihoodLevel, ...] = Field(min_length=1)
    impact: tuple[ImpactLevel, ...] = Field(min_length=1)
    intolerance: Intolerance = Intolerance()

    @model_validator(mode="after")
    def _scales_well_formed(self) -> ScoringSystem:
        _check_scale(self.likelihood, "likelihood")
        _check_scale(self.impact, "impact")
        if self.intolerance.cells is not None:
            expected = {(fi, si) for fi in self.likelihood_ranks for si in self.impact_ranks}
            keys = [(cell.likelihood, cell.impact) for cell in self.intolerance.cells]
            if len(keys) != len(set(keys)) or set(keys) != expected:
                raise ValueError("intolerance cells must cover every (likelihood, impact) pair exactly once")
        return self

    @property
    def low_max(self) -> int:
        return self.intolerance.low_max

    @property
    def high_min(self) -> int:
        return self.intolerance.high_min

    @property
    def cells(self) -> Optional[dict[tuple[int, int], IntoleranceLevel]]:
        if self.intolerance.cells is None:
            return None
        return {(c.likelihood, c.impact): c.level for c in self.intolerance.cells}

    @property
    def likelihood_ranks(self) -> range:
        return range(1, len(self.likelihood) + 1)

    @property
    def impact_ranks(self) -> range:
        return range(1, len(self.impact) + 1)


# =============================================================================
# SYSTEM COMPOSITION
# =============================================================================

class Component(_Element):
    id: ElementId
    name: str
    children: tuple[Component, ...] = ()
    external: bool = False


class LinkType(_Element):
    id: ElementId
    name: str
    color: str = "black"


class Directionality(str, Enum):
    BIDIRECTIONAL = "bidirectional"
    A_TO_B = "a_to_b"
    B_TO_A = "b_to_a"


class Link(_Element):
    id: ElementId
    type: ElementId
    a: ElementId
    b: ElementId
    directionality: Directionality = Directionality.BIDIRECTIONAL

    @property
    def endpoints(self) -> tuple[str, str]:
        return (self.a, self.b)


class DataItem(_Element):
    id: ElementId
    name: str


class DataFlow(_Element):
    id: ElementId
    source: ElementId
    destination: ElementId
    items: tuple[ElementId, ...] = Field(min_length=1)
    conveyed_by: tuple[ElementId, ...] = ()


# =============================================================================
# THREATS AND CONTROLS
# =============================================================================

class Attacker(_Element):
    # capability is recorded as assessed; nothing is derived from it
    id: ElementId
    name: str
    capability: int


class Threat(_Element):
    id: ElementId
    name: str
    attacker: Optional[ElementId] = None


class Control(_Element):
    """A protective function. With no ``allocated_to`` it is a catalog entry only."""

    id: ElementId
    name: str
    allocated_to: tuple[ElementId, ...] = ()
    mitigates_threats: tuple[ElementId, ...] = ()


class AllocationStatus(str, Enum):
    OPEN = "open"
    ACCEPTED = "accepted"


class ThreatAllocation(_Element):
    """A risk scenario: one threat applied to one component, with its FI/SI scores."""

    id: ElementId
    threat: ElementId
    component: ElementId
    fi: int
    si: int
    status: AllocationStatus = AllocationStatus.OPEN
    reported_ri: Optional[int] = None
    mitigated_by: tuple[ElementId, ...] = ()


class Reference(NamedTuple):
    path: str
    owner: str
    target: str
    kind: type


KIND_NAMES: dict[type, str] = {
    Component: "component",
    LinkType: "link type",
    Link: "link",
    DataItem: "data item",
    DataFlow: "data flow",
    Attacker: "attacker",
    Threat: "threat",
    Control: "control",
    ThreatAllocation: "threat allocation",
}

# top-level element arrays in document order, with the kind they hold
ELEMENT_ARRAYS: tuple[tuple[str, type], ...] = (
    ("link_types", LinkType),
    ("components", Component),
    ("links", Link),
    ("data_items", DataItem),
    ("data_flows", DataFlow),
    ("attackers", Attacker),
    ("threats", Threat),
    ("controls", Control),
    ("threat_allocations", ThreatAllocation),
)


# =============================================================================
# ROOT CONTAINER
# =============================================================================

class Model(_Element):
    name: str = ""
    scoring: ScoringSystem
    components: tuple[Component, ...] = ()
    link_types: tuple[LinkType, ...] = ()
    links: tuple[Link, ...] = ()
    data_items: tuple[DataItem, ...] = ()
    data_flows: tuple[DataFlow, ...] = ()
    attackers: tuple[Attacker, ...] = ()
    threats: tuple[Threat, ...] = ()
    controls: tuple[Control, ...] = ()
    threat_allocations: tuple[ThreatAllocation, ...] = ()

    _index: dict[str, _Element] = PrivateAttr(default_factory=dict)
    _parents: dict[str, Optional[str]] = PrivateAttr(default_factory=dict)
    _duplicates: tuple[str, ...] = PrivateAttr(default=())

    def model_post_init(self, __context) -> None:
        self._build_index()

    def model_copy(self, *, update: Optional[dict] = None, deep: bool = False) -> Model:
        # the id index and parent map follow the copied fields, not the original
        copied = super().model_copy(update=update, deep=deep)
        copied._build_index()
        return copied

    @classmethod
    def unchecked(cls, **fields) -> Model:
        """Assemble a model from already validated parts, skipping field validation."""
        model = cls.model_construct(**fields)
        model._build_index()
        return model

    def _build_index(self) -> None:
        index: dict[str, _Element] = {}
        parents: dict[str, Optional[str]] = {}
        duplicates: list[str] = []
        for path, element in self.iter_elements():
            if element.id in index:
                duplicates.append(element.id)
                continue
            index[element.id] = element
        for component, parent in self._walk_components():
            parents.setdefault(component.id, parent.id if parent else None)
        self._index = index
        self._parents = parents
        self._duplicates = tuple(dict.fromkeys(duplicates))

    # ---- traversal --------------------------------------------------------

    def _walk_components(self) -> Iterator[tuple[Component, Optional[Component]]]:
        stack = [(c, None) for c in reversed(self.components)]
        while stack:
            component, parent = stack.pop()
            yield component, parent
            stack.extend((child, component) for child in reversed(component.children))

    def iter_components(self) -> Iterator[Component]:
        """Every component of the forest, depth first in declaration order."""
        for component, _ in self._walk_components():
            yield component

    def iter_elements(self) -> Iterator[tuple[str, _Element]]:
        """(document path, element) for every identified element."""
        for array, kind in ELEMENT_ARRAYS:
            if kind is Component:
                yield from _component_paths(self.components, "/components")
                continue
            for i, element in enumerate(getattr(self, array)):
                yield f"/{array}/{i}", element

    def iter_references(self) -> Iterator[Reference]:
        """Every cross-reference held by the model, with its document path."""
        for i, link in enumerate(self.links):
            base = f"/links/{i}"
            yield Reference(f"{base}/type", link.id, link.type, LinkType)
            yield Reference(f"{base}/a", link.id, link.a, Component)
            yield Reference(f"{base}/b", link.id, link.b, Component)
        for i, flow in enumerate(self.data_flows):
            base = f"/data_flows/{i}"
            yield Reference(f"{base}/source", flow.id, flow.source, Component)
            yield Reference(f"{base}/destination", flow.id, flow.destination, Component)
            for j, item in enumerate(flow.items):
                yield Reference(f"{base}/items/{j}", flow.id, item, DataItem)
            for j, link_id in enumerate(flow.conveyed_by):
                yield Reference(f"{base}/conveyed_by/{j}", flow.id, link_id, Link)
        for i, threat in enumerate(self.threats):
            if threat.attacker is not None:
                yield Reference(f"/threats/{i}/attacker", threat.id, threat.attacker, Attacker)
        for i, control in enumerate(self.controls):
            base = f"/controls/{i}"
            for j, target in enumerate(control.allocated_to):
                yield Reference(f"{base}/allocated_to/{j}", control.id, target, Component)
            for j, target in enumerate(control.mitigates_threats):
                yield Reference(f"{base}/mitigates_threats/{j}", control.id, target, Threat)
        for i, allocation in enumerate(self.threat_allocations):
            base = f"/threat_allocations/{i}"
            yield Reference(f"{base}/threat", allocation.id, allocation.threat, Threat)
            yield Reference(f"{base}/component", allocation.id, allocation.component, Component)
            for j, target in enumerate(allocation.mitigated_by):
                yield Reference(f"{base}/mitigated_by/{j}", allocation.id, target, Control)

    # ---- lookups ----------------------------------------------------------

    @property
    def duplicate_ids(self) -> tuple[str, ...]:
        return self._duplicates

    def has(self, element_id: str, kind: type = _Element) -> bool:
        return isinstance(self._index.get(element_id), kind)

    def get(self, element_id: str, kind: type):
        element = self._index.get(element_id)
        if not isinstance(element, kind):
            raise ModelReferenceError(element_id, KIND_NAMES.get(kind, "element"))
        return element

    def component(self, element_id: str) -> Component:
        return self.get(element_id, Component)

    def link(self, element_id: str) -> Link:
        return self.get(element_id, Link)

    def threat(self, element_id: str) -> Threat:
        return self.get(element_id, Threat)

    def control(self, element_id: str) -> Control:
        return self.get(element_id, Control)

    def parent_of(self, component_id: str) -> Optional[str]:
        self.component(component_id)
        return self._parents.get(component_id)

    def ancestors(self, component_id: str) -> list[str]:
        """Strict ancestors, nearest first."""
        chain = []
        parent = self.parent_of(component_id)
        while parent is not None:
            chain.append(parent)
            parent = self._parents.get(parent)
        return chain


def _component_paths(components: tuple[Component, ...], base: str) -> Iterator[tuple[str, Component]]:
    for i, component in enumerate(components):
        path = f"{base}/{i}"
        yield path, component
        yield from _component_paths(component.children, f"{path}/children")
