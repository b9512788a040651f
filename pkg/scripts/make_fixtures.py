"""Regenerate the checked-in fixture files under fixtures/.

The golden table models a results table whose header band is ambiguous:
'Methods' and 'WAvg.F1' sit vertically between the two header rows, and
'IoU' sits horizontally between its two value columns.  Running the
pipeline resolves all three into spanning cells.

Usage: python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from s2doc import annotate, deserialize, serialize
from s2doc.cli import main as cli_main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

PAGE_COUNT = 17
TABLE_PAGE = 6  # zero-based
TABLE_REGION = (70, 90, 460, 170)

# (content, centre x, centre y, width, height); the caption and footnote
# fall outside the table region on purpose
GOLDEN_LINES = [
    ("Table 3: Comparison of methods.", 300, 75, 300, 14),
    ("Methods", 100, 125, 60, 36),
    ("Training", 200, 110, 60, 16),
    ("Dataset", 200, 140, 60, 16),
    ("IoU", 340, 110, 90, 16),
    ("0.5", 300, 140, 60, 16),
    ("0.6", 380, 140, 60, 16),
    ("WAvg.F1", 470, 125, 60, 36),
    ("VAST", 100, 170, 60, 16),
    ("DS-1", 200, 170, 60, 16),
    ("66.8", 300, 170, 60, 16),
    ("61.4", 380, 170, 60, 16),
    ("26.5", 470, 170, 60, 16),
    ("BaselineA", 100, 195, 60, 16),
    ("DS-2", 200, 195, 60, 16),
    ("58.1", 300, 195, 60, 16),
    ("52.7", 380, 195, 60, 16),
    ("43.8", 470, 195, 60, 16),
    ("BaselineB", 100, 220, 60, 16),
    ("DS-3", 200, 220, 60, 16),
    ("49.3", 300, 220, 60, 16),
    ("44.0", 380, 220, 60, 16),
    ("45.9", 470, 220, 60, 16),
    ("BaselineC", 100, 245, 60, 16),
    ("DS-4", 200, 245, 60, 16),
    ("37.2", 300, 245, 60, 16),
    ("31.5", 380, 245, 60, 16),
    ("58.6", 470, 245, 60, 16),
    ("Scores reported on the test split.", 300, 280, 300, 14),
]

GOLDEN_HTML = """<table>
<thead>
<tr><th rowspan="2">Methods</th><th>Training</th><th colspan="2">IoU</th><th rowspan="2">WAvg.F1</th></tr>
<tr><th>Dataset</th><th>0.5</th><th>0.6</th></tr>
</thead>
<tbody>
<tr><th>VAST</th><td>DS-1</td><td>66.8</td><td>61.4</td><td>26.5</td></tr>
<tr><th>BaselineA</th><td>DS-2</td><td>58.1</td><td>52.7</td><td>43.8</td></tr>
<tr><th>BaselineB</th><td>DS-3</td><td>49.3</td><td>44.0</td><td>45.9</td></tr>
<tr><th>BaselineC</th><td>DS-4</td><td>37.2</td><td>31.5</td><td>58.6</td></tr>
</tbody>
</table>
"""


def textlines_payload() -> dict:
    pages = []
    for i in range(PAGE_COUNT):
        page = {
            "spaces": [{"id": f"pg{i}", "dimensionality": 2, "extent": [612, 792], "unit": "point"}],
            "lines": [],
        }
        if i == TABLE_PAGE:
            for content, cx, cy, w, h in GOLDEN_LINES:
                page["lines"].append(
                    {"content": content, "space": f"pg{i}", "rect": [cx - w / 2, cy - h / 2, w, h]}
                )
        pages.append(page)
    return {"id": "arxiv:2303.06949", "metadata": {"source": "golden fixture"}, "pages": pages}


def build_ontology(doc) -> None:
    kg = doc.semantics.kg
    kg.add_concept("Result", node_id="Result")
    kg.add_concept("Model", node_id="Model")
    kg.add_concept("Dataset", node_id="Dataset")
    kg.add_concept("Metric", node_id="Metric")
    kg.add_entity("IoU", instance_of=["Metric"], node_id="IoU")
    kg.add_entity("WAvg.F1", instance_of=["Metric"], node_id="WAvg.F1")
    kg.add_relationship("Result", "Model", "related_to")
    kg.add_relationship("Result", "Dataset", "related_to")
    kg.add_relationship("Result", "Metric", "related_to")
    kg.add_relationship("Metric", "IoU", "related_to")
    kg.add_relationship("Metric", "WAvg.F1", "related_to")

    def cell_by_content(content: str) -> str:
        for eid, el in doc.elements.items():
            if el.kind == "tablecell" and el.content == content:
                return eid
        raise LookupError(content)

    annotate(doc, cell_by_content("VAST"), "Model")
    annotate(doc, cell_by_content("IoU"), "IoU")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    textlines = FIXTURES / "fig1.textlines.json"
    textlines.write_text(json.dumps(textlines_payload(), indent=1) + "\n", encoding="utf-8")

    golden = FIXTURES / "fig1.s2doc.json"
    region = ",".join(str(v) for v in TABLE_REGION) + f",{TABLE_PAGE}"
    status = cli_main(["pipeline", str(textlines), "--table-region", region, "-o", str(golden)])
    if status != 0:
        raise SystemExit(f"pipeline failed with status {status}")
    doc = deserialize(golden.read_bytes())
    build_ontology(doc)
    golden.write_bytes(serialize(doc))

    (FIXTURES / "fig1.table.html").write_text(GOLDEN_HTML, encoding="utf-8")

    (FIXTURES / "corrupt_cycle.s2doc.json").write_text(
        json.dumps(
            {
                "format_version": "s2doc/1",
                "id": "corrupt-cycle",
                "metadata": {},
                "pages": [],
                "elements": {
                    "a": {"kind": "block", "regions": []},
                    "b": {"kind": "block", "regions": []},
                },
                "references": [["a", "b", "belongs_to"], ["b", "a", "belongs_to"]],
                "knowledge_graph": {"concepts": {}, "entities": {}, "literals": {}, "relationships": []},
                "annotations": [],
            }
        )
        + "\n",
        encoding="utf-8",
    )
    (FIXTURES / "corrupt_dangling.s2doc.json").write_text(
        json.dumps(
            {
                "format_version": "s2doc/1",
                "id": "corrupt-dangling",
                "metadata": {},
                "pages": [],
                "elements": {"a": {"kind": "block", "regions": []}},
                "references": [["a", "ghost", "belongs_to"]],
                "knowledge_graph": {"concepts": {}, "entities": {}, "literals": {}, "relationships": []},
                "annotations": [],
            }
        )
        + "\n",
        encoding="utf-8",
    )
    (FIXTURES / "corrupt_version.s2doc.json").write_text(
        json.dumps(
            {
                "format_version": "s2doc/99",
                "id": "corrupt-version",
                "metadata": {},
                "pages": [],
                "elements": {},
                "references": [],
                "knowledge_graph": {"concepts": {}, "entities": {}, "literals": {}, "relationships": []},
                "annotations": [],
            }
        )
        + "\n",
        encoding="utf-8",
    )
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
