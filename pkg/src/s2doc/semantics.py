"""Ontological layer: knowledge graph nodes, annotations, and disambiguation.

The knowledge graph is independent of any document and, unlike the
reference graph, may contain cycles.  Annotations tie document elements
to graph nodes, optionally weighted by a confidence in [0, 1].
"""

from __future__ import annotations

import copy
import datetime
import math
import re
from dataclasses import dataclass, field

from .errors import ConflictError, InvalidArgumentError, NotFoundError, Violation
from .refgraph import BELONGS_TO

IS_A = "is_a"

_INT_RE = re.compile(r"[+-]?\d+")


@dataclass
class SemanticConcept:
    id: str
    label: str


@dataclass
class SemanticEntity:
    id: str
    label: str
    instance_of: list[str] = field(default_factory=list)


@dataclass
class Literal:
    id: str
    value: object
    datatype: str


@dataclass
class SemanticRelationship:
    source: str
    target: str
    predicate: str


LITERAL_DATATYPES = ("string", "number", "boolean", "date")


def coerce_literal(value: object, datatype: str) -> object:
    """Normalise a literal value per its datatype, or raise InvalidArgumentError."""
    if datatype == "string":
        if not isinstance(value, str):
            raise InvalidArgumentError(f"string literal requires str, got {type(value).__name__}")
        return value
    if datatype == "number":
        if isinstance(value, bool):
            raise InvalidArgumentError("boolean is not a number literal")
        if isinstance(value, (int, float)):
            number = value
        elif isinstance(value, str):
            try:
                number = int(value) if _INT_RE.fullmatch(value.strip()) else float(value)
            except ValueError:
                raise InvalidArgumentError(f"not a number: {value!r}") from None
        else:
            raise InvalidArgumentError(f"not a number: {value!r}")
        if isinstance(number, float) and not math.isfinite(number):
            raise InvalidArgumentError("number literal must be finite")
        return number
    if datatype == "boolean":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false"):
            return value.lower() == "true"
        raise InvalidArgumentError(f"not a boolean: {value!r}")
    if datatype == "date":
        if isinstance(value, str):
            try:
                return datetime.date.fromisoformat(value).isoformat()
            except ValueError:
                raise InvalidArgumentError(f"not an ISO date: {value!r}") from None
        raise InvalidArgumentError(f"not an ISO date: {value!r}")
    raise InvalidArgumentError(f"unknown literal datatype: {datatype!r}")


class SemanticKnowledgeGraph:
    """Concepts, entities, and literals as nodes; relationships as edges."""

    def __init__(self):
        self.concepts: dict[str, SemanticConcept] = {}
        self.entities: dict[str, SemanticEntity] = {}
        self.literals: dict[str, Literal] = {}
        self.relationships: list[SemanticRelationship] = []
        self._counter = 1

    def has_node(self, node_id: str) -> bool:
        return node_id in self.concepts or node_id in self.entities or node_id in self.literals

    def node_ids(self) -> list[str]:
        return list(self.concepts) + list(self.entities) + list(self.literals)

    def _claim_id(self, node_id: str | None) -> str:
        if node_id is None:
            while self.has_node(f"k{self._counter}"):
                self._counter += 1
            node_id = f"k{self._counter}"
            self._counter += 1
        if not isinstance(node_id, str) or not node_id:
            raise InvalidArgumentError("node identifier must be a non-empty string")
        if self.has_node(node_id):
            raise ConflictError(f"knowledge graph node already exists: {node_id!r}")
        return node_id

    def add_concept(self, label: str, node_id: str | None = None) -> str:
        if not label:
            raise InvalidArgumentError("concept label must be non-empty")
        node_id = self._claim_id(node_id)
        self.concepts[node_id] = SemanticConcept(node_id, label)
        return node_id

    def add_entity(self, label: str, instance_of: list[str] | None = None,
                   node_id: str | None = None) -> str:
        if not label:
            raise InvalidArgumentError("entity label must be non-empty")
        instance_of = list(instance_of or [])
        for cid in instance_of:
            if cid not in self.concepts:
                raise NotFoundError(f"unknown concept: {cid!r}")
        node_id = self._claim_id(node_id)
        self.entities[node_id] = SemanticEntity(node_id, label, instance_of)
        return node_id

    def add_literal(self, value: object, datatype: str, node_id: str | None = None) -> str:
        value = coerce_literal(value, datatype)
        node_id = self._claim_id(node_id)
        self.literals[node_id] = Literal(node_id, value, datatype)
        return node_id

    def add_relationship(self, source: str, target: str, predicate: str) -> None:
        if not predicate:
            raise InvalidArgumentError("relationship predicate must be non-empty")
        for endpoint in (source, target):
            if not self.has_node(endpoint):
                raise NotFoundError(f"unknown knowledge graph node: {endpoint!r}")
        self.relationships.append(SemanticRelationship(source, target, predicate))

    def clone(self) -> "SemanticKnowledgeGraph":
        """Deep copy with identical node identifiers."""
        return copy.deepcopy(self)

    def validate(self) -> list[Violation]:
        """Invariant check that needs no document attached."""
        violations: list[Violation] = []
        seen: set[str] = set()
        for node_id in self.node_ids():
            if node_id in seen:
                violations.append(
                    Violation("kg-duplicate-id", f"node id used more than once: {node_id!r}", (node_id,))
                )
            seen.add(node_id)
        for entity in self.entities.values():
            for cid in entity.instance_of:
                if cid not in self.concepts:
                    violations.append(
                        Violation(
                            "kg-dangling",
                            f"entity {entity.id!r} is instance_of unknown concept {cid!r}",
                            (entity.id, cid),
                        )
                    )
        for rel in self.relationships:
            for endpoint in (rel.source, rel.target):
                if not self.has_node(endpoint):
                    violations.append(
                        Violation(
                            "kg-dangling",
                            f"relationship {rel.predicate!r} references unknown node {endpoint!r}",
                            (endpoint,),
                        )
                    )
            if not rel.predicate:
                violations.append(Violation("kg-predicate", "empty relationship predicate", ()))
        for literal in self.literals.values():
            try:
                coerce_literal(literal.value, literal.datatype)
            except InvalidArgumentError as exc:
                violations.append(
                    Violation("literal-datatype", f"literal {literal.id!r}: {exc}", (literal.id,))
                )
        return violations


@dataclass
class Annotation:
    element: str
    node: str
    confidence: float | None = None


class SemanticLayer:
    """A document's knowledge graph plus its element annotations."""

    def __init__(self, kg: SemanticKnowledgeGraph | None = None):
        self.kg = kg if kg is not None else SemanticKnowledgeGraph()
        self.annotations: list[Annotation] = []


def check_confidence(value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidArgumentError(f"confidence must be a real number, got {value!r}")
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise InvalidArgumentError(f"confidence out of range [0, 1]: {value!r}")
    return float(value)


def annotate(doc, element_id: str, node_id: str, confidence: float | None = None) -> None:
    """Tie a document element to a knowledge graph node.

    An element may carry any number of annotations; only exact duplicate
    (element, node) pairs are rejected.
    """
    if element_id not in doc.elements:
        raise NotFoundError(f"unknown element: {element_id!r}")
    layer = doc.semantics
    if not layer.kg.has_node(node_id):
        raise NotFoundError(f"unknown knowledge graph node: {node_id!r}")
    if confidence is not None:
        confidence = check_confidence(confidence)
    for ann in layer.annotations:
        if ann.element == element_id and ann.node == node_id:
            raise ConflictError(f"duplicate annotation: ({element_id!r}, {node_id!r})")
    layer.annotations.append(Annotation(element_id, node_id, confidence))


def annotations_of(doc, element_id: str) -> list[tuple[str, float | None]]:
    """All (node id, confidence) annotations of an element, insertion-ordered."""
    if element_id not in doc.elements:
        raise NotFoundError(f"unknown element: {element_id!r}")
    return [(a.node, a.confidence) for a in doc.semantics.annotations if a.element == element_id]


def _concept_closure(kg: SemanticKnowledgeGraph, concept_ids: list[str], depth: int) -> set[str]:
    # expands upward along is_a relationships (concept -> more general concept)
    closure = set(concept_ids)
    frontier = set(concept_ids)
    for _ in range(depth):
        step: set[str] = set()
        for rel in kg.relationships:
            if rel.predicate == IS_A and rel.source in frontier and rel.target in kg.concepts:
                if rel.target not in closure:
                    step.add(rel.target)
        if not step:
            break
        closure |= step
        frontier = step
    return closure


def disambiguate_by_context(doc, element_id: str, *, is_a_depth: int = 3) -> list[tuple[str, int]]:
    """Rank an element's candidate entities by how well its ancestors agree.

    A candidate entity scores one point per ancestor element (through
    "belongs_to" parents, e.g. the containing column or table) carrying a
    concept annotation the entity is an instance of, following "is_a"
    relationships up to ``is_a_depth`` levels.  Base annotation confidence
    breaks ties; the result is sorted descending and stable.
    """
    if element_id not in doc.elements:
        raise NotFoundError(f"unknown element: {element_id!r}")
    layer = doc.semantics
    candidates: list[tuple[str, float]] = []
    for ann in layer.annotations:
        if ann.element == element_id and ann.node in layer.kg.entities:
            candidates.append((ann.node, 1.0 if ann.confidence is None else ann.confidence))
    if not candidates:
        raise InvalidArgumentError(f"element {element_id!r} has no entity annotations")

    ancestors: list[str] = []
    seen = {element_id}
    queue = [element_id]
    while queue:
        node = queue.pop(0)
        for parent in doc.refgraph.parents(node, BELONGS_TO):
            if parent not in seen:
                seen.add(parent)
                ancestors.append(parent)
                queue.append(parent)

    concept_annotations: dict[str, set[str]] = {}
    for ann in layer.annotations:
        if ann.element in seen and ann.node in layer.kg.concepts:
            concept_annotations.setdefault(ann.element, set()).add(ann.node)

    ranked = []
    for order, (entity_id, base) in enumerate(candidates):
        closure = _concept_closure(layer.kg, layer.kg.entities[entity_id].instance_of, is_a_depth)
        score = sum(
            1 for anc in ancestors if concept_annotations.get(anc, set()) & closure
        )
        ranked.append((entity_id, score, base, order))
    ranked.sort(key=lambda item: (-item[1], -item[2], item[3]))
    return [(entity_id, score) for entity_id, score, _, _ in ranked]


def clone_graph_for(kg: SemanticKnowledgeGraph, doc) -> SemanticKnowledgeGraph:
    """Install a deep copy of a knowledge graph on another document.

    The copy keeps every node identifier; the target document starts with
    no annotations against it.
    """
    clone = kg.clone()
    doc.semantics = SemanticLayer(clone)
    return clone
