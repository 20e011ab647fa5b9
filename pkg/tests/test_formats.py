import copy
import json

import pytest

from pswork import fixtures
from pswork.errors import ParseError, ValidationError
from pswork.finset import fresh_workspace
from pswork.formats import (
    canonical_json,
    envelope,
    parse_document,
    parse_presheaf_payload,
    serialize_kan,
    serialize_model,
    serialize_morphism,
    serialize_presheaf,
)
from pswork.canon import morphism_digest, presheaf_digest


ALL_DATA_FILES = [
    "set.model.json",
    "setset.model.json",
    "cat.model.json",
    "two.presheaf.json",
    "f_ob.kan.json",
    "f_prod.kan.json",
    "f_times2.kan.json",
    "times2_gp.morphism.json",
    "times2_glu.morphism.json",
    "times2_gru.morphism.json",
    "times2_gass.morphism.json",
    "times2_glu_domE.trace.json",
]


@pytest.mark.parametrize("name", ALL_DATA_FILES)
def test_all_bundled_documents_parse(name):
    doc = fixtures.data_document(name)
    parsed = parse_document(doc)
    assert parsed.kind == doc["kind"]


def test_bundled_static_docs_match_source_constants():
    for name, doc in fixtures.STATIC_DOCS.items():
        assert fixtures.data_document(name) == doc


@pytest.mark.parametrize("name", ["set.model.json", "setset.model.json", "cat.model.json"])
def test_model_round_trip_byte_identical(name):
    doc = fixtures.data_document(name)
    mb = parse_document(copy.deepcopy(doc)).value
    out = envelope("model", serialize_model(mb))
    assert canonical_json(out) == canonical_json(doc)


def test_presheaf_round_trip_byte_identical():
    doc = fixtures.data_document("two.presheaf.json")
    with fresh_workspace():
        cm = fixtures.load_cat_model()
        np = parse_presheaf_payload(
            {k: v for k, v in doc["payload"].items() if k != "base"}, cm.base)
        payload = {"base": doc["payload"]["base"], **serialize_presheaf(np)}
    assert canonical_json(envelope("presheaf", payload)) == canonical_json(doc)


@pytest.mark.parametrize("name", ["f_ob.kan.json", "f_prod.kan.json", "f_times2.kan.json"])
def test_kan_round_trip_byte_identical(name):
    doc = fixtures.data_document(name)
    kb = parse_document(copy.deepcopy(doc)).value
    out = envelope("kan_model", serialize_kan(kb))
    assert canonical_json(out) == canonical_json(doc)


def test_parse_is_deterministic_across_workspaces():
    def digests():
        with fresh_workspace():
            mb = fixtures.load_cat_model()
            return [morphism_digest(g) for g in mb.model.conditions]

    assert digests() == digests()


def test_unknown_kind_rejected():
    with pytest.raises(ParseError):
        parse_document({"format_version": "1.0.0", "kind": "nonsense", "payload": {}})


def test_missing_payload_rejected():
    with pytest.raises(ParseError):
        parse_document({"format_version": "1.0.0", "kind": "model"})


def test_version_major_mismatch_rejected():
    doc = fixtures.data_document("set.model.json")
    doc["format_version"] = "2.0.0"
    with pytest.raises(ParseError):
        parse_document(doc)


def test_unknown_element_in_action_rejected():
    doc = fixtures.data_document("setset.model.json")
    bad = doc["payload"]["conditions"][0]["morphism"]["target"]["actions"]["l"]
    bad["bp"] = "nope"
    with pytest.raises(ParseError):
        parse_document(doc)


def test_non_functorial_presheaf_rejected():
    doc = fixtures.data_document("two.presheaf.json")
    # ident must be a section of src; break it
    doc["payload"]["actions"]["ident"]["n0"] = "e01"
    with pytest.raises(ValidationError):
        parse_document(doc)


def test_unnatural_condition_rejected():
    doc = fixtures.data_document("cat.model.json")
    comp = doc["payload"]["conditions"][1]["morphism"]["components"]["m"]
    comp["w"] = "i"  # breaks naturality of the unit-law condition
    with pytest.raises(ValidationError):
        parse_document(doc)


def test_kan_base_cross_check():
    from pswork.formats import parse_kan_payload

    with fresh_workspace():
        ssm = fixtures.load_setset_model()
        doc = fixtures.data_document("f_ob.kan.json")
        with pytest.raises(ParseError):
            parse_kan_payload(doc["payload"], source_base=ssm.base)


def test_presheaf_digest_separates_structures():
    with fresh_workspace():
        cm = fixtures.load_cat_model()
        a = presheaf_digest(cm.model.conditions[0].source)
        b = presheaf_digest(cm.model.conditions[0].target)
    assert a != b


def test_trace_document_replays(tmp_path):
    doc = fixtures.data_document("times2_glu_domE.trace.json")
    td = parse_document(doc).value
    from pswork.gametrace import replay_document

    ok, final, problems = replay_document(td)
    assert ok, problems
    assert final.won()


def test_trace_bad_digest_detected():
    doc = fixtures.data_document("times2_glu_domE.trace.json")
    doc["payload"]["steps"][1]["digest"] = "0" * 64
    td = parse_document(doc).value
    from pswork.gametrace import replay_document

    ok, _final, problems = replay_document(td)
    assert not ok
    assert any("digest mismatch" in p for p in problems)
