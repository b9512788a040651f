import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from s2doc import (
    Element,
    ParseError,
    ValidationError,
    add_element,
    create_document,
    deserialize,
    serialize,
    validate_document,
)

from helpers import FIXTURES, random_document


class TestCanonicalRoundTrip:
    def test_golden_fixture_byte_identity(self):
        raw = (FIXTURES / "fig1.s2doc.json").read_bytes()
        assert serialize(deserialize(raw)) == raw

    def test_serialize_deserialize_serialize(self):
        doc = random_document(random.Random(1))
        once = serialize(doc)
        assert serialize(deserialize(once)) == once

    def test_equal_documents_produce_identical_bytes(self):
        def build():
            doc = create_document("d", {"b": 1, "a": 2})
            add_element(doc, Element(id="x", kind="block", data={"z": [1, 2], "a": {"k": "v"}}))
            return doc

        assert serialize(build()) == serialize(build())
        assert build() == build()

    def test_insertion_order_of_map_keys_is_irrelevant(self):
        doc1 = create_document("d")
        add_element(doc1, Element(id="x", kind="block", data={"a": 1, "b": 2}))
        doc2 = create_document("d")
        add_element(doc2, Element(id="x", kind="block", data={"b": 2, "a": 1}))
        assert serialize(doc1) == serialize(doc2)

    def test_different_documents_differ(self):
        doc1 = create_document("d", {"n": 1})
        doc2 = create_document("d", {"n": 2})
        assert serialize(doc1) != serialize(doc2)
        assert doc1 != doc2

    def test_unicode_content_survives(self):
        doc = create_document("d")
        add_element(doc, Element(id="x", kind="textline", content="µ 表格 ẞ  "))
        out = deserialize(serialize(doc))
        assert out.elements["x"].content == "µ 表格 ẞ  "

    def test_numbers_round_trip_bit_exactly(self):
        doc = create_document("d", {"f": 0.1 + 0.2, "i": 10**15, "neg": -2.5e-8})
        out = deserialize(serialize(doc))
        assert out.metadata["f"] == 0.1 + 0.2
        assert out.metadata["i"] == 10**15
        assert out.metadata["neg"] == -2.5e-8

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_random_documents_round_trip(self, seed):
        doc = random_document(random.Random(seed))
        data = serialize(doc)
        twin = deserialize(data)
        assert serialize(twin) == data
        assert validate_document(twin) == []


class TestForwardCompatibility:
    def test_unknown_top_level_keys_preserved(self):
        doc = create_document("d")
        doc.extra["x-pipeline"] = {"stage": 3}
        out = deserialize(serialize(doc))
        assert out.extra == {"x-pipeline": {"stage": 3}}
        assert serialize(out) == serialize(doc)

    def test_unknown_element_keys_preserved(self):
        doc = create_document("d")
        add_element(doc, Element(id="x", kind="block"))
        doc.elements["x"].extra["x-future"] = [1, 2, 3]
        out = deserialize(serialize(doc))
        assert out.elements["x"].extra == {"x-future": [1, 2, 3]}
        assert serialize(out) == serialize(doc)

    def test_unknown_version_rejected_by_name(self):
        raw = (FIXTURES / "corrupt_version.s2doc.json").read_bytes()
        with pytest.raises(ValidationError) as exc:
            deserialize(raw)
        assert "s2doc/99" in str(exc.value)
        assert exc.value.violations[0].code == "format-version"


class TestRejection:
    def test_malformed_json_gives_offset(self):
        with pytest.raises(ParseError) as exc:
            deserialize(b'{"format_version": "s2doc/1", ')
        assert exc.value.offset is not None

    def test_invalid_utf8(self):
        with pytest.raises(ParseError):
            deserialize(b"\xff\xfe{}")

    def test_cycle_fixture_lists_the_cycle(self):
        raw = (FIXTURES / "corrupt_cycle.s2doc.json").read_bytes()
        with pytest.raises(ValidationError) as exc:
            deserialize(raw)
        cycles = [v for v in exc.value.violations if v.code == "cycle"]
        assert cycles and set(cycles[0].subjects) == {"a", "b"}

    def test_dangling_fixture_rejected(self):
        raw = (FIXTURES / "corrupt_dangling.s2doc.json").read_bytes()
        with pytest.raises(ValidationError) as exc:
            deserialize(raw)
        assert any(v.code == "dangling-reference" for v in exc.value.violations)

    def test_duplicate_edge_rejected(self):
        doc = create_document("d")
        add_element(doc, Element(id="a", kind="block"))
        add_element(doc, Element(id="b", kind="block"), parents=["a"])
        payload = json.loads(serialize(doc))
        payload["references"].append(["a", "b", "belongs_to"])
        with pytest.raises(ValidationError) as exc:
            deserialize(json.dumps(payload))
        assert any(v.code == "duplicate-edge" for v in exc.value.violations)

    def test_bad_region_bounds_rejected(self):
        raw = (FIXTURES / "fig1.s2doc.json").read_bytes()
        payload = json.loads(raw)
        some_element = next(
            eid for eid, el in payload["elements"].items() if el.get("regions")
        )
        payload["elements"][some_element]["regions"][0]["shape"]["x"] = -5
        with pytest.raises(ValidationError) as exc:
            deserialize(json.dumps(payload))
        assert any(v.code == "region-bounds" for v in exc.value.violations)

    def test_every_violation_reported_not_just_the_first(self):
        payload = {
            "format_version": "s2doc/1",
            "id": "multi",
            "metadata": {},
            "pages": [],
            "elements": {
                "a": {"kind": "block", "regions": []},
                "b": {"kind": "block", "regions": []},
            },
            "references": [
                ["a", "b", "belongs_to"],
                ["b", "a", "belongs_to"],
                ["a", "ghost", "belongs_to"],
            ],
            "knowledge_graph": {"concepts": {}, "entities": {}, "literals": {}, "relationships": []},
            "annotations": [["a", "nope", None]],
        }
        with pytest.raises(ValidationError) as exc:
            deserialize(json.dumps(payload))
        codes = {v.code for v in exc.value.violations}
        assert {"cycle", "dangling-reference", "annotation-dangling"} <= codes


class TestGeneratedIdsAfterLoad:
    def test_new_ids_do_not_collide(self):
        doc = create_document("d")
        for _ in range(3):
            add_element(doc, Element(kind="block"))
        out = deserialize(serialize(doc))
        new_id = add_element(out, Element(kind="block"))
        assert new_id not in ("e1", "e2", "e3")
        assert len(out.elements) == 4
