"""
Model documents: parse JSON into a resolved ``Model`` and write the canonical form.

Canonical form: keys sorted, arrays in declaration order, two-space indent,
LF line endings and a trailing newline. ``serialize_model(parse_model(d)) == d``
holds byte for byte for every canonical document ``d``.
"""
from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Literal

import structlog
from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError

from services.errors import ModelLoadError
from services.model import ELEMENT_ARRAYS, KIND_NAMES, Model, ScoringSystem

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = "1"

_ARRAY_ADAPTERS = {array: TypeAdapter(tuple[kind, ...]) for array, kind in ELEMENT_ARRAYS}


class ParseErrorKind(str, Enum):
    SYNTAX = "syntax"
    SCHEMA = "schema"
    DUPLICATE_ID = "duplicate_id"
    DANGLING_REFERENCE = "dangling_reference"
    RANGE = "range"


class ParseError(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ParseErrorKind
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.kind.value}: {self.message}"


class _ModelDocument(Model):
    schema_version: Literal["1"]


def _pointer(loc: tuple) -> str:
    return "/" + "/".join(str(part) for part in loc) if loc else "/"


def _schema_errors(exc: ValidationError) -> list[ParseError]:
    errors = []
    for detail in exc.errors():
        loc = tuple(detail["loc"])
        if detail["type"] == "json_invalid":
            errors.append(ParseError(kind=ParseErrorKind.SYNTAX, path="/", message=detail["msg"]))
            continue
        if loc == ("schema_version",) and detail["type"] == "literal_error":
            message = f"unsupported schema_version {detail['input']!r}, expected '{SCHEMA_VERSION}'"
        elif detail["type"] == "extra_forbidden":
            message = "unknown field"
        elif detail["type"] == "missing":
            message = "missing field"
        else:
            message = detail["msg"]
        errors.append(ParseError(kind=ParseErrorKind.SCHEMA, path=_pointer(loc), message=message))
    return errors


def _identity_errors(model: Model) -> list[ParseError]:
    seen: set[str] = set()
    errors = []
    for path, element in model.iter_elements():
        if element.id in seen:
            errors.append(ParseError(
                kind=ParseErrorKind.DUPLICATE_ID, path=f"{path}/id", message=f"id '{element.id}' already declared",
            ))
        seen.add(element.id)
    return errors


def _reference_errors(model: Model, unknown_kinds: frozenset[type] = frozenset()) -> list[ParseError]:
    return [
        ParseError(
            kind=ParseErrorKind.DANGLING_REFERENCE,
            path=ref.path,
            message=f"'{ref.target}' is not a declared {KIND_NAMES[ref.kind]}",
        )
        for ref in model.iter_references()
        if ref.kind not in unknown_kinds and not model.has(ref.target, ref.kind)
    ]


def _range_errors(model: Model) -> list[ParseError]:
    scoring = model.scoring
    errors = []
    for i, allocation in enumerate(model.threat_allocations):
        for field, ranks, scale in (("fi", scoring.likelihood_ranks, "likelihood"), ("si", scoring.impact_ranks, "impact")):
            value = getattr(allocation, field)
            if value not in ranks:
                errors.append(ParseError(
                    kind=ParseErrorKind.RANGE,
                    path=f"/threat_allocations/{i}/{field}",
                    message=f"{scale} rank {value} outside 1..{len(ranks)}",
                ))
    return errors


def _salvage_errors(raw: object) -> list[ParseError]:
    """
    Identity, reference and range errors in a document that failed the schema.

    Each element array and the scoring system are validated on their own. A
    malformed array is left out, and references into its kind are not judged.
    """
    if not isinstance(raw, dict):
        return []
    fields, broken = {}, set()
    for array, kind in ELEMENT_ARRAYS:
        try:
            fields[array] = _ARRAY_ADAPTERS[array].validate_json(json.dumps(raw.get(array, [])), strict=True)
        except ValidationError:
            fields[array] = ()
            broken.add(kind)
    try:
        scoring = ScoringSystem.model_validate_json(json.dumps(raw.get("scoring")), strict=True)
    except ValidationError:
        scoring = None

    model = Model.unchecked(scoring=scoring, **fields)
    errors = _identity_errors(model) + _reference_errors(model, frozenset(broken))
    if scoring is not None:
        errors += _range_errors(model)
    return errors


def parse_model(text: str | bytes) -> Model:
    """
    Parse a model document.

    Returns:
        Model: every reference resolved, every score within its scale

    Raises:
        ModelLoadError: carrying every independent ParseError found
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelLoadError([ParseError(kind=ParseErrorKind.SYNTAX, path="/", message=f"not UTF-8: {exc}")])
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelLoadError([ParseError(
            kind=ParseErrorKind.SYNTAX, path="/", message=f"line {exc.lineno} column {exc.colno}: {exc.msg}",
        )])

    try:
        document = _ModelDocument.model_validate_json(text, strict=True)
    except ValidationError as exc:
        raise ModelLoadError(_schema_errors(exc) + _salvage_errors(raw))

    model = Model(**{name: getattr(document, name) for name in Model.model_fields})
    errors = _identity_errors(model) + _reference_errors(model) + _range_errors(model)
    if errors:
        raise ModelLoadError(errors)

    logger.debug(
        "model.parsed",
        name=model.name,
        components=sum(1 for _ in model.iter_components()),
        allocations=len(model.threat_allocations),
    )
    return model


def serialize_model(model: Model) -> str:
    document = model.model_dump(mode="json")
    document["schema_version"] = SCHEMA_VERSION
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_model(path: str | Path) -> Model:
    """Read and parse a model document from disk."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ModelLoadError([ParseError(kind=ParseErrorKind.SYNTAX, path="/", message=f"cannot read {path}: {exc.strerror}")])
    model = parse_model(raw)
    logger.info("model.loaded", path=str(path), name=model.name)
    return model


def save_model(model: Model, path: str | Path) -> None:
    # newline="" keeps LF endings on every platform
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(serialize_model(model))

