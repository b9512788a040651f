"""Full-document validation: one violation record per broken invariant.

Used after deserialization (input is untrusted) and by the command-line
``validate`` command.  Mutating operations keep documents valid by
construction, so a freshly built document always passes.
"""

from __future__ import annotations

import math

from .errors import InvalidArgumentError, Violation
from .model import Document, SCALARS, region_problem
from .refgraph import ROOT_ID
from .semantics import check_confidence
from .tables import COLUMN, ROW, TABLE, TABLECELL, table_cells, table_columns, table_rows


def validate_document(doc: Document) -> list[Violation]:
    violations: list[Violation] = []
    violations.extend(doc.refgraph.validate())
    violations.extend(_check_identifiers(doc))
    violations.extend(_check_pages(doc))
    violations.extend(_check_elements(doc))
    violations.extend(_check_tables(doc))
    violations.extend(doc.semantics.kg.validate())
    violations.extend(_check_annotations(doc))
    return violations


def _check_identifiers(doc: Document) -> list[Violation]:
    violations = []
    known = {ROOT_ID} | {p.id for p in doc.pages} | set(doc.elements)
    for node in doc.refgraph.nodes():
        if node not in known:
            violations.append(
                Violation("dangling-reference", f"graph node {node!r} is no page or element", (node,))
            )
    for required in known:
        if not doc.refgraph.has_node(required):
            violations.append(
                Violation("missing-node", f"{required!r} is missing from the reference graph", (required,))
            )
    try:
        for key, value in doc.metadata.items():
            if not isinstance(key, str) or not isinstance(value, SCALARS):
                violations.append(
                    Violation("metadata-value", f"metadata entry {key!r} is not a scalar", (str(key),))
                )
            elif isinstance(value, float) and not math.isfinite(value):
                violations.append(
                    Violation("metadata-value", f"metadata entry {key!r} is not finite", (str(key),))
                )
    except AttributeError:
        violations.append(Violation("metadata-value", "metadata is not a map", ()))
    return violations


def _check_pages(doc: Document) -> list[Violation]:
    violations = []
    seen_pages: set[str] = set()
    seen_spaces: set[str] = set()
    for position, page in enumerate(doc.pages):
        if page.id in seen_pages:
            violations.append(Violation("page-duplicate", f"page id repeated: {page.id!r}", (page.id,)))
        seen_pages.add(page.id)
        if page.index != position:
            violations.append(
                Violation(
                    "page-index",
                    f"page {page.id!r} has index {page.index}, expected {position}",
                    (page.id,),
                )
            )
        if not page.spaces:
            violations.append(Violation("space-invalid", f"page {page.id!r} has no space", (page.id,)))
        for space in page.spaces:
            if space.id in seen_spaces:
                violations.append(
                    Violation("space-duplicate", f"space id repeated: {space.id!r}", (space.id,))
                )
            seen_spaces.add(space.id)
            if space.dimensionality not in (1, 2) or len(space.extent) != space.dimensionality:
                violations.append(
                    Violation("space-invalid", f"space {space.id!r} has a bad dimensionality/extent", (space.id,))
                )
            elif any(not isinstance(x, (int, float)) or isinstance(x, bool) or x <= 0 for x in space.extent):
                violations.append(
                    Violation("space-invalid", f"space {space.id!r} has a non-positive extent", (space.id,))
                )
    return violations


def _check_elements(doc: Document) -> list[Violation]:
    violations = []
    for eid, element in doc.elements.items():
        if element.id != eid:
            violations.append(
                Violation("element-id", f"element stored under {eid!r} carries id {element.id!r}", (eid,))
            )
        if not element.kind:
            violations.append(Violation("element-kind", f"element {eid!r} has an empty kind", (eid,)))
        for region in element.regions:
            space = doc.find_space(region.space)
            if space is None:
                violations.append(
                    Violation(
                        "region-space",
                        f"element {eid!r} references unknown space {region.space!r}",
                        (eid, region.space),
                    )
                )
                continue
            problem = region_problem(region, space)
            if problem is not None:
                violations.append(
                    Violation("region-bounds", f"element {eid!r}: {problem}", (eid,))
                )
        violations.extend(_check_data(eid, element.data))
        violations.extend(_check_header_flags(eid, element.data))
    return violations


def _check_data(eid: str, value: object) -> list[Violation]:
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return []
    if isinstance(value, float):
        if not math.isfinite(value):
            return [Violation("data-value", f"element {eid!r} data holds a non-finite number", (eid,))]
        return []
    if isinstance(value, list):
        out: list[Violation] = []
        for item in value:
            out.extend(_check_data(eid, item))
        return out
    if isinstance(value, dict):
        out = []
        for key, item in value.items():
            if not isinstance(key, str):
                out.append(Violation("data-value", f"element {eid!r} data has a non-string key", (eid,)))
            out.extend(_check_data(eid, item))
        return out
    return [Violation("data-value", f"element {eid!r} data holds {type(value).__name__}", (eid,))]


def _check_header_flags(eid: str, data: dict) -> list[Violation]:
    violations = []
    for flag in ("is_row_header", "is_column_header"):
        conf = data.get(f"{flag}_confidence")
        if conf is not None:
            if flag not in data:
                violations.append(
                    Violation(
                        "header-confidence",
                        f"element {eid!r} carries {flag}_confidence without the flag",
                        (eid,),
                    )
                )
            try:
                check_confidence(conf)
            except InvalidArgumentError as exc:
                violations.append(Violation("confidence-range", f"element {eid!r}: {exc}", (eid,)))
    return violations


def _check_tables(doc: Document) -> list[Violation]:
    violations = []
    for table in doc.elements_of_kind(TABLE):
        cells = set(table_cells(doc, table.id))
        grid = table.data.get("grid")
        n_rows = table.data.get("n_rows")
        n_cols = table.data.get("n_cols")
        if grid is not None:
            rows_ok = isinstance(grid, list) and all(isinstance(r, list) for r in grid)
            if not rows_ok:
                violations.append(Violation("grid-shape", f"table {table.id!r} grid is not a matrix", (table.id,)))
                continue
            width = len(grid[0]) if grid else 0
            if any(len(r) != width for r in grid):
                violations.append(Violation("grid-shape", f"table {table.id!r} grid is ragged", (table.id,)))
            if n_rows is not None and n_rows != len(grid):
                violations.append(
                    Violation("grid-shape", f"table {table.id!r} n_rows disagrees with its grid", (table.id,))
                )
            if n_cols is not None and grid and n_cols != width:
                violations.append(
                    Violation("grid-shape", f"table {table.id!r} n_cols disagrees with its grid", (table.id,))
                )
            for row in grid:
                for slot in row:
                    if not isinstance(slot, list):
                        violations.append(
                            Violation("grid-shape", f"table {table.id!r} grid slot is not a list", (table.id,))
                        )
                        continue
                    for cid in slot:
                        if cid not in doc.elements or doc.elements[cid].kind != TABLECELL:
                            violations.append(
                                Violation(
                                    "grid-reference",
                                    f"table {table.id!r} grid references unknown cell {cid!r}",
                                    (table.id, str(cid)),
                                )
                            )
                        elif cid not in cells:
                            violations.append(
                                Violation(
                                    "grid-membership",
                                    f"grid cell {cid!r} does not belong to table {table.id!r}",
                                    (table.id, cid),
                                )
                            )
        for kind, groups in ((ROW, table_rows(doc, table.id)), (COLUMN, table_columns(doc, table.id))):
            indices = sorted(g.data.get("index", -1) for g in groups)
            if groups and indices != list(range(len(groups))):
                violations.append(
                    Violation(
                        "index-sequence",
                        f"table {table.id!r} {kind} indices are not consecutive from 0",
                        (table.id,),
                    )
                )
    return violations


def _check_annotations(doc: Document) -> list[Violation]:
    violations = []
    kg = doc.semantics.kg
    seen: set[tuple[str, str]] = set()
    for ann in doc.semantics.annotations:
        if ann.element not in doc.elements:
            violations.append(
                Violation(
                    "annotation-dangling",
                    f"annotation references unknown element {ann.element!r}",
                    (ann.element,),
                )
            )
        if not kg.has_node(ann.node):
            violations.append(
                Violation(
                    "annotation-dangling",
                    f"annotation references unknown knowledge graph node {ann.node!r}",
                    (ann.node,),
                )
            )
        pair = (ann.element, ann.node)
        if pair in seen:
            violations.append(
                Violation("annotation-duplicate", f"annotation pair repeated: {pair}", pair)
            )
        seen.add(pair)
        if ann.confidence is not None:
            try:
                check_confidence(ann.confidence)
            except InvalidArgumentError as exc:
                violations.append(Violation("confidence-range", str(exc), pair))
    return violations
