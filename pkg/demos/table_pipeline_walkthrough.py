"""Walk a results table from raw text lines to semantic tuples.

The fixture models a table whose header band is ambiguous: 'Methods' and
'WAvg.F1' sit vertically between the two header rows, and 'IoU' sits
horizontally between the two value columns it describes.  Each pipeline
stage below adds one more model to the same document.

Run from the repository root:

    python3 demos/table_pipeline_walkthrough.py
"""

import json
from pathlib import Path

from s2doc import (
    Rect,
    Region,
    Table,
    add_element,
    annotate,
    assign_cells_by_region,
    cluster_alignment,
    disambiguate_by_context,
    extract_semantic_tuples,
    grid_from_graph,
    import_textlines,
    mark_headers_auto,
    resolve_spanning,
    serialize,
    table_cells,
    table_columns,
    table_rows,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# ---------------------------------------------------------------- physical
# The input is a page of located text lines, the kind of thing a PDF text
# extractor produces.  Importing it builds the physical model: pages,
# coordinate spaces, and one element per line.

doc = import_textlines(json.loads((FIXTURES / "fig1.textlines.json").read_text()))
print(f"document {doc.id!r}: {len(doc.pages)} pages, {len(doc.elements)} text lines")

# A table detector said there is a table on page 7 (index 6).  We add a
# table element with that region and turn every contained line into a cell.

page = doc.pages[6]
table = Table(regions=[Region(page.spaces[0].id, Rect(70, 90, 460, 170))])
table_id = add_element(doc, table, parents=[page.id])
cells = assign_cells_by_region(
    doc, table_id, [eid for eid, el in doc.elements.items() if el.kind == "textline"]
)
print(f"cells inside the table region: {len(cells)}")

# ----------------------------------------------------------------- logical
# Alignment clustering groups cells into rows and columns.  Cells that do
# not line up with any band land in temporary singleton clusters.

cluster_alignment(doc, table_id, "row")
cluster_alignment(doc, table_id, "column")
temp = [
    doc.elements[m].content
    for group in table_rows(doc, table_id) + table_columns(doc, table_id)
    if group.data.get("temporary")
    for m in doc.refgraph.children(group.id)
]
print(f"ambiguous cells in temporary clusters: {temp}")

# Resolution converts each temporary cluster into spanning-cell
# memberships: 'IoU' becomes a child of both columns it straddles.

resolve_spanning(doc, table_id)
grid_from_graph(doc, table_id)
iou = next(c for c in table_cells(doc, table_id) if doc.elements[c].content == "IoU")
col_index = {c.id: c.data["index"] for c in table_columns(doc, table_id)}
print("IoU column memberships:", sorted(col_index[p] for p in doc.refgraph.parents(iou) if p in col_index))

# -------------------------------------------------------------- functional
# The default marking takes the first row and first column, grown across
# spanning cells, so both stacked header rows are covered.

mark_headers_auto(doc, table_id)

# ---------------------------------------------------------------- semantic
# One tuple per data cell; spanning headers show up in every tuple of the
# columns they cover.

tuples = extract_semantic_tuples(doc, table_id)
print(f"\n{len(tuples)} semantic tuples, first four:")
for record in tuples[:4]:
    print("  ", record.render())

# -------------------------------------------------------------- ontological
# Background knowledge lives in a knowledge graph; annotations tie cells
# to its nodes.  With two candidate meanings on one cell, the containing
# column's concept annotation decides.

kg = doc.semantics.kg
kg.add_concept("Metric", node_id="Metric")
kg.add_concept("Model", node_id="Model")
kg.add_entity("IoU (metric)", instance_of=["Metric"], node_id="iou-metric")
kg.add_entity("IoU GmbH", instance_of=["Model"], node_id="iou-other")
annotate(doc, iou, "iou-metric", confidence=0.5)
annotate(doc, iou, "iou-other", confidence=0.5)
column = next(c for c in table_columns(doc, table_id) if col_index[c.id] == 2)
annotate(doc, column.id, "Metric")
print("\ndisambiguation of the 'IoU' cell:", disambiguate_by_context(doc, iou))

# The finished document carries all five layers in one canonical file.

import tempfile

out = Path(tempfile.gettempdir()) / "fig1_walkthrough.s2doc.json"
out.write_bytes(serialize(doc))
print(f"\nwrote {out} ({out.stat().st_size} bytes)")
