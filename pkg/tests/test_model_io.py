import json

import pytest

from services.errors import ModelLoadError
from services.model_io import (
    SCHEMA_VERSION,
    ParseError,
    ParseErrorKind,
    load_model,
    parse_model,
    save_model,
    serialize_model,
)


def _document(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def _errors(document) -> list[ParseError]:
    text = document if isinstance(document, str) else json.dumps(document)
    with pytest.raises(ModelLoadError) as excinfo:
        parse_model(text)
    return excinfo.value.errors


def test_minimal_document(default_scoring):
    document = {"schema_version": "1", "scoring": default_scoring.model_dump(mode="json")}
    model = parse_model(json.dumps(document))
    assert model.name == ""
    assert list(model.iter_elements()) == []
    assert len(model.scoring.likelihood) == 7
    assert len(model.scoring.impact) == 4
    assert (model.scoring.low_max, model.scoring.high_min) == (4, 8)


def test_parse_baseline(baseline_path):
    model = parse_model(baseline_path.read_bytes())
    assert model.has("shore-control-centre")
    assert model.has("ship-systems")
    assert len(model.data_flows) == 2
    assert [a.id for a in model.threat_allocations] == ["s1", "s2", "s10", "s7"]
    assert model.parent_of("connectivity-manager") == "ship-systems"


@pytest.mark.parametrize("name", ["baseline", "enhanced"])
def test_golden_documents_are_canonical(request, name):
    text = request.getfixturevalue(f"{name}_path").read_text(encoding="utf-8")
    assert serialize_model(parse_model(text)) == text


def test_serialize_empty_model(empty_model):
    text = serialize_model(empty_model)
    assert text.endswith("}\n")
    assert "\r" not in text
    document = json.loads(text)
    assert document["schema_version"] == SCHEMA_VERSION
    assert document["name"] == ""
    for array in ("components", "links", "link_types", "data_flows", "threats", "controls", "threat_allocations"):
        assert document[array] == []
    assert document["scoring"]["intolerance"] == {"cells": None, "high_min": 8, "low_max": 4}
    assert list(document) == sorted(document)


def test_serialize_is_stable(empty_model):
    text = serialize_model(empty_model)
    assert serialize_model(parse_model(text)) == text


def test_dangling_component_reference(baseline_path):
    document = _document(baseline_path)
    document["threat_allocations"][0]["component"] = "connectivity-mgr"
    errors = _errors(document)
    assert len(errors) == 1
    assert errors[0].kind is ParseErrorKind.DANGLING_REFERENCE
    assert errors[0].path == "/threat_allocations/0/component"
    assert "connectivity-mgr" in errors[0].message


def test_every_dangling_reference_is_reported(baseline_path):
    document = _document(baseline_path)
    document["threat_allocations"][0]["component"] = "ghost-1"
    document["threat_allocations"][1]["threat"] = "ghost-2"
    document["links"][0]["type"] = "ghost-3"
    errors = _errors(document)
    assert sorted(e.path for e in errors) == [
        "/links/0/type",
        "/threat_allocations/0/component",
        "/threat_allocations/1/threat",
    ]
    assert {e.kind for e in errors} == {ParseErrorKind.DANGLING_REFERENCE}


def test_reference_to_wrong_kind(baseline_path):
    document = _document(baseline_path)
    # a threat id where a component is expected
    document["threat_allocations"][0]["component"] = "physical-attack"
    errors = _errors(document)
    assert errors[0].message == "'physical-attack' is not a declared component"


def test_unknown_field(baseline_path):
    document = _document(baseline_path)
    document["components"][0]["colour"] = "blue"
    errors = _errors(document)
    assert [(e.kind, e.path, e.message) for e in errors] == [
        (ParseErrorKind.SCHEMA, "/components/0/colour", "unknown field")
    ]


def test_unsupported_schema_version(baseline_path):
    document = _document(baseline_path)
    document["schema_version"] = "2"
    errors = _errors(document)
    assert errors[0].kind is ParseErrorKind.SCHEMA
    assert errors[0].path == "/schema_version"
    assert "unsupported schema_version" in errors[0].message


def test_missing_scoring():
    errors = _errors({"schema_version": "1"})
    assert [(e.kind, e.path, e.message) for e in errors] == [(ParseErrorKind.SCHEMA, "/scoring", "missing field")]


def test_scores_must_be_integers(baseline_path):
    document = _document(baseline_path)
    document["threat_allocations"][0]["fi"] = "5"
    errors = _errors(document)
    assert errors[0].kind is ParseErrorKind.SCHEMA
    assert errors[0].path == "/threat_allocations/0/fi"


def test_bad_id_pattern(baseline_path):
    document = _document(baseline_path)
    document["threats"][0]["id"] = "Social Engineering"
    errors = _errors(document)
    assert any(e.path == "/threats/0/id" and e.kind is ParseErrorKind.SCHEMA for e in errors)


def test_syntax_error():
    errors = _errors('{"schema_version": "1",')
    assert len(errors) == 1
    assert errors[0].kind is ParseErrorKind.SYNTAX
    assert errors[0].path == "/"


def test_invalid_utf8():
    with pytest.raises(ModelLoadError) as excinfo:
        parse_model(b"\xff\xfe{}")
    assert excinfo.value.errors[0].kind is ParseErrorKind.SYNTAX


def test_duplicate_id(baseline_path):
    document = _document(baseline_path)
    document["threats"].append(dict(document["threats"][0]))
    errors = _errors(document)
    assert [(e.kind, e.path) for e in errors] == [(ParseErrorKind.DUPLICATE_ID, "/threats/4/id")]


def test_duplicate_id_across_kinds(baseline_path):
    document = _document(baseline_path)
    document["attackers"].append({"capability": 1, "id": "internet", "name": "Internet users"})
    errors = _errors(document)
    assert [(e.kind, e.path) for e in errors] == [(ParseErrorKind.DUPLICATE_ID, "/attackers/1/id")]


def test_score_out_of_range(baseline_path):
    document = _document(baseline_path)
    document["threat_allocations"][3]["fi"] = 9
    errors = _errors(document)
    assert [(e.kind, e.path, e.message) for e in errors] == [
        (ParseErrorKind.RANGE, "/threat_allocations/3/fi", "likelihood rank 9 outside 1..7")
    ]

def test_schema_error_does_not_hide_dangling_references(baseline_path):
    document = _document(baseline_path)
    document["links"][0]["colour"] = "orange"
    document["threat_allocations"][0]["component"] = "ghost-1"
    document["threat_allocations"][1]["threat"] = "ghost-2"
    errors = _errors(document)
    assert [(e.kind, e.path) for e in errors] == [
        (ParseErrorKind.SCHEMA, "/links/0/colour"),
        (ParseErrorKind.DANGLING_REFERENCE, "/threat_allocations/0/component"),
        (ParseErrorKind.DANGLING_REFERENCE, "/threat_allocations/1/threat"),
    ]


def test_references_into_a_malformed_array_are_not_judged(baseline_path):
    document = _document(baseline_path)
    document["links"][0]["colour"] = "orange"
    document["data_flows"][0]["conveyed_by"] = ["link-shore-comm", "link-comm-connectivity"]
    errors = _errors(document)
    assert [(e.kind, e.path) for e in errors] == [(ParseErrorKind.SCHEMA, "/links/0/colour")]


def test_schema_error_does_not_hide_range_or_identity_errors(baseline_path):
    document = _document(baseline_path)
    document["name"] = 7
    document["threat_allocations"][3]["fi"] = 9
    document["threats"].append(dict(document["threats"][0]))
    errors = _errors(document)
    assert [(e.kind, e.path) for e in errors] == [
        (ParseErrorKind.SCHEMA, "/name"),
        (ParseErrorKind.DUPLICATE_ID, "/threats/4/id"),
        (ParseErrorKind.RANGE, "/threat_allocations/3/fi"),
    ]



def test_parse_error_string():
    error = ParseError(kind=ParseErrorKind.RANGE, path="/threat_allocations/3/fi", message="too big")
    assert str(error) == "/threat_allocations/3/fi: range: too big"


def test_load_error_summarises_first_problem(baseline_path):
    document = _document(baseline_path)
    document["threat_allocations"][0]["component"] = "connectivity-mgr"
    with pytest.raises(ModelLoadError, match="1 parse error: /threat_allocations/0/component"):
        parse_model(json.dumps(document))


def test_save_and_load(tmp_path, enhanced, enhanced_path):
    target = tmp_path / "model.json"
    save_model(enhanced, target)
    assert target.read_bytes() == enhanced_path.read_bytes()
    assert serialize_model(load_model(target)) == enhanced_path.read_text(encoding="utf-8")


def test_load_missing_file(tmp_path):
    with pytest.raises(ModelLoadError) as excinfo:
        load_model(tmp_path / "absent.json")
    assert "cannot read" in excinfo.value.errors[0].message
