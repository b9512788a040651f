"""Canonical, versioned document serialization.

The wire format is a single UTF-8 JSON file (conventional extension
".s2doc.json").  Serialization is canonical: map keys are sorted, list
orders preserved, and numbers rendered in their shortest round-trip
form, so equal documents produce identical bytes.  Elements are stored
flat in an id-keyed map with graph edges listed separately, because
nesting cannot express multi-parent cells.

Unknown keys found at the top level or inside an element survive a
round-trip; an unknown format version is rejected.
"""

from __future__ import annotations

import json

from .errors import ParseError, ValidationError, Violation
from .model import (
    Document,
    Element,
    Page,
    Polygon,
    Polyline,
    Rect,
    Region,
    Space,
    Span1D,
)
from .semantics import (
    Annotation,
    Literal,
    SemanticConcept,
    SemanticEntity,
    SemanticKnowledgeGraph,
    SemanticLayer,
    SemanticRelationship,
)
from .tables import KIND_CLASSES
from .validate import validate_document

FORMAT_VERSION = "s2doc/1"

_TOP_KEYS = (
    "format_version",
    "id",
    "metadata",
    "pages",
    "elements",
    "references",
    "knowledge_graph",
    "annotations",
)
_ELEMENT_KEYS = ("kind", "regions", "content", "data")


# -- to JSON ---------------------------------------------------------------


def _shape_to_json(shape) -> dict:
    if isinstance(shape, Span1D):
        return {"type": "span", "start": shape.start, "end": shape.end}
    if isinstance(shape, Rect):
        return {
            "type": "rect",
            "x": shape.x,
            "y": shape.y,
            "width": shape.width,
            "height": shape.height,
        }
    if isinstance(shape, Polygon):
        return {"type": "polygon", "points": [[x, y] for x, y in shape.points]}
    if isinstance(shape, Polyline):
        return {"type": "polyline", "points": [[x, y] for x, y in shape.points]}
    raise ValidationError([Violation("region-shape", f"unserializable shape {type(shape).__name__}")])


def _region_to_json(region: Region) -> dict:
    return {"space": region.space, "shape": _shape_to_json(region.shape)}


def _element_to_json(element: Element) -> dict:
    out: dict = dict(element.extra)
    out["kind"] = element.kind
    out["regions"] = [_region_to_json(r) for r in element.regions]
    if element.content is not None:
        out["content"] = element.content
    if element.data:
        out["data"] = element.data
    return out


def _kg_to_json(kg: SemanticKnowledgeGraph) -> dict:
    return {
        "concepts": {c.id: {"label": c.label} for c in kg.concepts.values()},
        "entities": {
            e.id: {"label": e.label, "instance_of": list(e.instance_of)}
            for e in kg.entities.values()
        },
        "literals": {
            l.id: {"value": l.value, "datatype": l.datatype} for l in kg.literals.values()
        },
        "relationships": [[r.source, r.target, r.predicate] for r in kg.relationships],
    }


def to_jsonable(doc: Document) -> dict:
    """The document as plain JSON-compatible data, ready for canonical dumping."""
    out: dict = dict(doc.extra)
    out["format_version"] = FORMAT_VERSION
    out["id"] = doc.id
    out["metadata"] = doc.metadata
    out["pages"] = [
        {
            "id": page.id,
            "index": page.index,
            "spaces": [
                {
                    "id": s.id,
                    "dimensionality": s.dimensionality,
                    "extent": list(s.extent),
                    "unit": s.unit,
                }
                for s in page.spaces
            ],
        }
        for page in doc.pages
    ]
    out["elements"] = {eid: _element_to_json(el) for eid, el in doc.elements.items()}
    out["references"] = [
        [s, t, l] for s, t, l in doc.refgraph.edges()
    ]
    out["knowledge_graph"] = _kg_to_json(doc.semantics.kg)
    out["annotations"] = [
        [a.element, a.node, a.confidence] for a in doc.semantics.annotations
    ]
    return out


def serialize(doc: Document) -> bytes:
    """Canonical bytes: sorted keys, shortest number forms, one trailing newline."""
    text = json.dumps(
        to_jsonable(doc), sort_keys=True, ensure_ascii=False, separators=(",", ":"),
        allow_nan=False,
    )
    return (text + "\n").encode("utf-8")


# -- from JSON ---------------------------------------------------------------


def _shape_from_json(raw: dict):
    kind = raw.get("type")
    if kind == "span":
        return Span1D(raw["start"], raw["end"])
    if kind == "rect":
        return Rect(raw["x"], raw["y"], raw["width"], raw["height"])
    if kind == "polygon":
        return Polygon([(x, y) for x, y in raw["points"]])
    if kind == "polyline":
        return Polyline([(x, y) for x, y in raw["points"]])
    raise _schema(f"unknown region shape type {kind!r}")


def _schema(message: str) -> ValidationError:
    return ValidationError([Violation("schema", message)])


def _element_from_json(eid: str, raw: dict) -> Element:
    if not isinstance(raw, dict):
        raise _schema(f"element {eid!r} is not a map")
    kind = raw.get("kind")
    if not isinstance(kind, str):
        raise _schema(f"element {eid!r} has no kind")
    cls = KIND_CLASSES.get(kind, Element)
    regions = []
    for raw_region in raw.get("regions", ()):
        if not isinstance(raw_region, dict) or "space" not in raw_region or "shape" not in raw_region:
            raise _schema(f"element {eid!r} has a malformed region")
        regions.append(Region(raw_region["space"], _shape_from_json(raw_region["shape"])))
    element = cls(
        id=eid,
        kind=kind,
        regions=regions,
        content=raw.get("content"),
        data=raw.get("data") or {},
    )
    element.extra = {k: v for k, v in raw.items() if k not in _ELEMENT_KEYS}
    return element


def deserialize(raw: bytes | str) -> Document:
    """Parse canonical bytes back into a document.

    Malformed syntax raises ParseError with a character offset; a wrong
    format version or any semantic violation raises ValidationError
    listing every problem found.  Deserialized input is untrusted, so the
    full validation pass always runs.
    """
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}", offset=exc.start) from None
    else:
        text = raw
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from None
    if not isinstance(data, dict):
        raise _schema("top level is not a map")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(
            [
                Violation(
                    "format-version",
                    f"unsupported format version {version!r}, expected {FORMAT_VERSION!r}",
                    (str(version),),
                )
            ]
        )
    doc_id = data.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise _schema("document id missing or empty")

    doc = Document(doc_id)
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise _schema("metadata is not a map")
    doc.metadata = metadata
    doc.extra = {k: v for k, v in data.items() if k not in _TOP_KEYS}

    pages = data.get("pages", [])
    if not isinstance(pages, list):
        raise _schema("pages is not a list")
    for raw_page in pages:
        if not isinstance(raw_page, dict) or "id" not in raw_page:
            raise _schema("page entry is malformed")
        spaces = []
        for raw_space in raw_page.get("spaces", ()):
            if not isinstance(raw_space, dict):
                raise _schema(f"page {raw_page['id']!r} has a malformed space")
            spaces.append(
                Space(
                    id=raw_space.get("id", ""),
                    dimensionality=raw_space.get("dimensionality", 0),
                    extent=list(raw_space.get("extent", ())),
                    unit=raw_space.get("unit", ""),
                )
            )
        page = Page(raw_page["id"], raw_page.get("index", -1), spaces)
        doc.pages.append(page)
        doc.refgraph._add_node_unchecked(page.id)

    elements = data.get("elements", {})
    if not isinstance(elements, dict):
        raise _schema("elements is not a map")
    for eid, raw_element in elements.items():
        doc.elements[eid] = _element_from_json(eid, raw_element)
        doc.refgraph._add_node_unchecked(eid)

    references = data.get("references", [])
    if not isinstance(references, list):
        raise _schema("references is not a list")
    for entry in references:
        if not isinstance(entry, list) or len(entry) != 3:
            raise _schema(f"reference entry is malformed: {entry!r}")
        source, target, label = entry
        doc.refgraph._add_edge_unchecked(source, target, label)

    doc.semantics = _semantics_from_json(data)

    violations = validate_document(doc)
    if violations:
        raise ValidationError(violations)
    return doc


def _semantics_from_json(data: dict) -> SemanticLayer:
    kg = SemanticKnowledgeGraph()
    raw_kg = data.get("knowledge_graph", {})
    if not isinstance(raw_kg, dict):
        raise _schema("knowledge_graph is not a map")
    for cid, raw in raw_kg.get("concepts", {}).items():
        kg.concepts[cid] = SemanticConcept(cid, raw.get("label", ""))
    for eid, raw in raw_kg.get("entities", {}).items():
        kg.entities[eid] = SemanticEntity(eid, raw.get("label", ""), list(raw.get("instance_of", ())))
    for lid, raw in raw_kg.get("literals", {}).items():
        kg.literals[lid] = Literal(lid, raw.get("value"), raw.get("datatype", ""))
    for entry in raw_kg.get("relationships", ()):
        if not isinstance(entry, list) or len(entry) != 3:
            raise _schema(f"relationship entry is malformed: {entry!r}")
        kg.relationships.append(SemanticRelationship(*entry))
    layer = SemanticLayer(kg)
    raw_annotations = data.get("annotations", [])
    if not isinstance(raw_annotations, list):
        raise _schema("annotations is not a list")
    for entry in raw_annotations:
        if not isinstance(entry, list) or len(entry) != 3:
            raise _schema(f"annotation entry is malformed: {entry!r}")
        element, node, confidence = entry
        layer.annotations.append(Annotation(element, node, confidence))
    return layer
