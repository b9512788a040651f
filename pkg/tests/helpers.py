"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library code paths they check:
reachability is brute force, tuple expectations come from index
arithmetic, and containment counting rescans rectangles directly.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from s2doc import (
    Document,
    Element,
    Rect,
    Region,
    Space,
    Table,
    TableCell,
    add_element,
    add_page,
    annotate,
    assign_cells_by_region,
    cluster_alignment,
    create_document,
    grid_from_graph,
    mark_functional,
    mark_headers_auto,
    resolve_spanning,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TABLE_PAGE = 6
TABLE_REGION = (70, 90, 460, 170)


def load_fig1_textlines() -> dict:
    return json.loads((FIXTURES / "fig1.textlines.json").read_text(encoding="utf-8"))


def run_fig1_pipeline(tau: float | None = None):
    """The golden table through the in-process pipeline; returns (doc, table id)."""
    from s2doc import import_textlines

    doc = import_textlines(load_fig1_textlines())
    page = doc.pages[TABLE_PAGE]
    table = Table(regions=[Region(page.spaces[0].id, Rect(*TABLE_REGION))])
    table_id = add_element(doc, table, parents=[page.id])
    candidates = [eid for eid, el in doc.elements.items() if el.kind == "textline"]
    assign_cells_by_region(doc, table_id, candidates)
    cluster_alignment(doc, table_id, "row", tau=tau)
    cluster_alignment(doc, table_id, "column", tau=tau)
    resolve_spanning(doc, table_id)
    grid_from_graph(doc, table_id)
    mark_headers_auto(doc, table_id)
    return doc, table_id


def cell_by_content(doc: Document, table_id: str, content: str) -> str:
    from s2doc import table_cells

    for cid in table_cells(doc, table_id):
        if doc.elements[cid].content == content:
            return cid
    raise LookupError(content)


# -- grid-only tables ---------------------------------------------------------


def make_grid_doc(contents: list[list[str]], doc_id: str = "grid"):
    """Document holding one table whose grid has one cell per slot."""
    doc = create_document(doc_id)
    page_id = add_page(doc, [Space("chars", 1, [1], "char")])
    table = Table()
    table_id = add_element(doc, table, parents=[page_id])
    grid = []
    for row in contents:
        slots = []
        for value in row:
            cid = add_element(doc, TableCell(content=value), parents=[table_id])
            slots.append([cid])
        grid.append(slots)
    table.n_rows = len(contents)
    table.n_cols = len(contents[0]) if contents else 0
    table.grid = grid
    return doc, table_id


def mark_first_row_col_headers(doc: Document, table_id: str) -> None:
    """Row 0 column headers, column 0 row headers, rest data (grid mode)."""
    table = doc.get_element(table_id)
    grid = table.grid
    for i, row in enumerate(grid):
        for j, slot in enumerate(row):
            for cid in slot:
                if i == 0:
                    mark_functional(doc, cid, "column_header")
                elif j == 0:
                    mark_functional(doc, cid, "row_header")
                else:
                    mark_functional(doc, cid, "data")


def index_arithmetic_tuples(contents: list[list[str]]) -> list[tuple]:
    """Expected tuples for a plain grid with row-0/column-0 headers."""
    expected = []
    for i in range(1, len(contents)):
        for j in range(1, len(contents[0])):
            expected.append(
                ([contents[i][0]], [contents[0][j]], [contents[i][j]])
            )
    return expected


def random_span_grid(rng: random.Random, max_rows: int = 8, max_cols: int = 8):
    """Random occupancy matrix of cell labels, spans always rectangular."""
    n_rows = rng.randint(1, max_rows)
    n_cols = rng.randint(1, max_cols)
    occupancy = [[None] * n_cols for _ in range(n_rows)]
    label = 0
    for i in range(n_rows):
        for j in range(n_cols):
            if occupancy[i][j] is not None:
                continue
            max_w = 1
            while j + max_w < n_cols and occupancy[i][j + max_w] is None:
                max_w += 1
            w = rng.randint(1, min(max_w, 3)) if rng.random() < 0.3 else 1
            max_h = 1
            while i + max_h < n_rows and all(
                occupancy[i + max_h][j + dc] is None for dc in range(w)
            ):
                max_h += 1
            h = rng.randint(1, min(max_h, 3)) if rng.random() < 0.3 else 1
            label += 1
            for di in range(h):
                for dj in range(w):
                    occupancy[i + di][j + dj] = f"c{label}"
    return occupancy


def make_span_table(rng: random.Random, max_rows: int = 8, max_cols: int = 8):
    """Random table with rectangular spanning cells, stored as a grid."""
    occupancy = random_span_grid(rng, max_rows, max_cols)
    doc = create_document("span-table")
    page_id = add_page(doc, [Space("chars", 1, [1], "char")])
    table = Table()
    table_id = add_element(doc, table, parents=[page_id])
    ids: dict[str, str] = {}
    for row in occupancy:
        for label in row:
            if label not in ids:
                ids[label] = add_element(
                    doc, TableCell(content=label), parents=[table_id]
                )
    grid = [[[ids[label]] for label in row] for row in occupancy]
    table.n_rows = len(occupancy)
    table.n_cols = len(occupancy[0])
    table.grid = grid
    return doc, table_id, grid


# -- geometric tables ----------------------------------------------------------


def make_aligned_doc(m: int, n: int, *, row_pitch: float = 25, col_pitch: float = 40,
                     cell_w: float = 30, cell_h: float = 16):
    """Perfectly aligned m x n grid of text lines plus a covering table."""
    doc = create_document("aligned")
    width = 40 + n * col_pitch + 40
    height = 40 + m * row_pitch + 40
    page_id = add_page(doc, [Space("s0", 2, [width, height], "point")])
    for i in range(m):
        for j in range(n):
            cx = 40 + col_pitch * j + col_pitch / 2
            cy = 40 + row_pitch * i + row_pitch / 2
            add_element(
                doc,
                Element(
                    kind="textline",
                    content=f"r{i}c{j}",
                    regions=[Region("s0", Rect(cx - cell_w / 2, cy - cell_h / 2, cell_w, cell_h))],
                ),
                parents=[page_id],
            )
    table = Table(regions=[Region("s0", Rect(30, 30, n * col_pitch + 20, m * row_pitch + 20))])
    table_id = add_element(doc, table, parents=[page_id])
    candidates = [eid for eid, el in doc.elements.items() if el.kind == "textline"]
    assign_cells_by_region(doc, table_id, candidates)
    return doc, table_id


# -- graph oracle ----------------------------------------------------------------


class ReachabilityOracle:
    """Brute-force cycle detection over an explicit edge list."""

    def __init__(self):
        self.edges: dict[str, set[tuple[str, str]]] = {}

    def can_reach(self, start: str, goal: str, label: str) -> bool:
        if start == goal:
            return True
        seen = {start}
        stack = [start]
        edges = self.edges.get(label, set())
        while stack:
            node = stack.pop()
            for s, t in edges:
                if s == node and t not in seen:
                    if t == goal:
                        return True
                    seen.add(t)
                    stack.append(t)
        return False

    def would_cycle(self, source: str, target: str, label: str) -> bool:
        return source == target or self.can_reach(target, source, label)

    def add(self, source: str, target: str, label: str) -> None:
        self.edges.setdefault(label, set()).add((source, target))


# -- random documents --------------------------------------------------------------


_WORDS = ["alpha", "beta", "µ-gamma", "表格", "delta 𝛿", "", "quote\"back\\slash", "naïve"]


def random_document(rng: random.Random) -> Document:
    doc = create_document(
        f"doc-{rng.randrange(10**6)}",
        {"lang": rng.choice(_WORDS), "pages": rng.randint(0, 99), "draft": rng.random() < 0.5},
    )
    page_ids = []
    for p in range(rng.randint(0, 3)):
        spaces = [Space(f"sp{p}", 2, [200 + rng.randint(0, 400), 300 + rng.randint(0, 500)], "pixel")]
        if rng.random() < 0.3:
            spaces.append(Space(f"sp{p}t", 1, [rng.randint(1, 9999)], "char"))
        page_ids.append(add_page(doc, spaces))
    element_ids = []
    for _ in range(rng.randint(0, 12)):
        regions = []
        if page_ids and rng.random() < 0.6:
            page = doc.pages[rng.randrange(len(page_ids))]
            space = page.spaces[0]
            w = rng.uniform(0, space.extent[0] / 2)
            h = rng.uniform(0, space.extent[1] / 2)
            x = rng.uniform(0, space.extent[0] - w)
            y = rng.uniform(0, space.extent[1] - h)
            regions.append(Region(space.id, Rect(x, y, w, h)))
        data = {}
        if rng.random() < 0.7:
            data = {
                "tags": rng.sample(_WORDS, k=rng.randint(0, 3)),
                "weight": rng.choice([rng.random(), rng.randint(-5, 5), None, True]),
                "nested": {"k": rng.choice(_WORDS)},
            }
        parents = []
        if page_ids and rng.random() < 0.8:
            parents.append(rng.choice(page_ids))
        if element_ids and rng.random() < 0.4:
            extra_parent = rng.choice(element_ids)
            if extra_parent not in parents:
                parents.append(extra_parent)
        element_ids.append(
            add_element(
                doc,
                Element(kind=rng.choice(["textline", "figure", "block"]),
                        content=rng.choice(_WORDS + [None]), regions=regions, data=data),
                parents=parents,
            )
        )
    # an auxiliary relation: edges only from earlier to later elements stay acyclic
    for i, eid in enumerate(element_ids):
        if i and rng.random() < 0.3:
            doc.refgraph.add_edge(element_ids[i - 1], eid, "reading_order")
    kg = doc.semantics.kg
    concept_ids = [kg.add_concept(rng.choice(_WORDS[:4]) or "c") for _ in range(rng.randint(0, 3))]
    entity_ids = []
    for _ in range(rng.randint(0, 3)):
        instance_of = rng.sample(concept_ids, k=rng.randint(0, len(concept_ids)))
        entity_ids.append(kg.add_entity(rng.choice(_WORDS[:4]) or "e", instance_of))
    if rng.random() < 0.5:
        value, datatype = rng.choice(
            [(rng.random(), "number"), ("text", "string"), (True, "boolean"), ("2024-02-29", "date")]
        )
        kg.add_literal(value, datatype)
    nodes = kg.node_ids()
    for _ in range(rng.randint(0, 4)):
        if len(nodes) >= 2:
            kg.add_relationship(rng.choice(nodes), rng.choice(nodes), rng.choice(["related_to", "is_a"]))
    seen_pairs = set()
    for _ in range(rng.randint(0, 5)):
        if element_ids and nodes:
            pair = (rng.choice(element_ids), rng.choice(nodes))
            if pair not in seen_pairs:
                seen_pairs.add(pair)
                annotate(doc, pair[0], pair[1],
                         None if rng.random() < 0.5 else round(rng.random(), 3))
    if rng.random() < 0.3:
        doc.extra["x-custom"] = {"preserved": True}
    return doc
