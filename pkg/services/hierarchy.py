"""
Component hierarchy queries and data-flow conveyance checks.

Endpoint matching is hierarchical: a link terminating at Connectivity Manager
can carry a flow addressed to its parent Ship systems, and vice versa.
Link directionality never affects conveyance.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterator, Optional

from pydantic import BaseModel, ConfigDict

from services.model import DataFlow, Link, Model
from utils.ordering import natural_key


class PathStatus(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNSPECIFIED = "unspecified"


class PathVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: PathStatus
    reason: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.status is PathStatus.VALID


def is_within(model: Model, x: str, y: str) -> bool:
    """True when component x is y or one of its descendants."""
    model.component(y)
    if x == y:
        model.component(x)
        return True
    return y in model.ancestors(x)


def matches(model: Model, x: str, y: str) -> bool:
    return is_within(model, x, y) or is_within(model, y, x)


def _touches(model: Model, link: Link, component_id: str) -> bool:
    return any(matches(model, end, component_id) for end in link.endpoints)


def _share_component(model: Model, first: Link, second: Link) -> bool:
    return any(matches(model, x, y) for x in first.endpoints for y in second.endpoints)


def check_conveyance_path(model: Model, flow: DataFlow) -> PathVerdict:
    """
    Judge a flow's declared conveying links.

    Valid when the first link touches the source, the last link touches the
    destination and every consecutive pair of links shares a component.

    Raises:
        ModelReferenceError: a conveying link, or one of its endpoints, is unknown
    """
    model.component(flow.source)
    model.component(flow.destination)
    if not flow.conveyed_by:
        return PathVerdict(status=PathStatus.UNSPECIFIED)
    links = [model.link(link_id) for link_id in flow.conveyed_by]
    for link in links:
        for end in link.endpoints:
            model.component(end)

    if not _touches(model, links[0], flow.source):
        return PathVerdict(status=PathStatus.INVALID, reason=f"first link '{links[0].id}' misses source '{flow.source}'")
    if not _touches(model, links[-1], flow.destination):
        return PathVerdict(
            status=PathStatus.INVALID, reason=f"last link '{links[-1].id}' misses destination '{flow.destination}'"
        )
    for first, second in zip(links, links[1:]):
        if not _share_component(model, first, second):
            return PathVerdict(
                status=PathStatus.INVALID, reason=f"links '{first.id}' and '{second.id}' share no component"
            )
    return PathVerdict(status=PathStatus.VALID)


def candidate_paths(model: Model, flow: DataFlow, max_hops: int = 3) -> list[tuple[str, ...]]:
    """
    Link walks able to convey ``flow``, shortest first.

    A walk enters each link at an endpoint matching its current position and
    leaves through the other endpoint; no link is used twice.
    """
    model.component(flow.source)
    model.component(flow.destination)
    usable = [
        link for link in model.links
        if link.a != link.b and model.has(link.a) and model.has(link.b)
    ]
    found: set[tuple[str, ...]] = set()

    def walk(position: str, used: tuple[Link, ...]) -> Iterator[tuple[str, ...]]:
        if used and matches(model, position, flow.destination):
            yield tuple(link.id for link in used)
        if len(used) == max_hops:
            return
        for link in usable:
            if link in used:
                continue
            for entry, exit_ in ((link.a, link.b), (link.b, link.a)):
                if matches(model, entry, position):
                    yield from walk(exit_, used + (link,))

    for path in walk(flow.source, ()):
        found.add(path)
    return sorted(found, key=lambda path: (len(path), [natural_key(p) for p in path]))
