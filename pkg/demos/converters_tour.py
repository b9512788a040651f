"""Round trips through the supported formats.

Run from the repository root:

    python3 demos/converters_tour.py
"""

import json

from s2doc import (
    export_csv,
    export_html_table,
    extract_semantic_tuples,
    import_coco,
    import_csv,
    import_html_table,
    serialize,
)

# Delimited text carries contents only, so the import populates just the
# logical model: a grid of cells with no geometry.

doc = import_csv(b"metric,score\nprecision,0.91\nrecall,0.84")
table = doc.elements_of_kind("table")[0]
print(f"csv import: {table.n_rows} x {table.n_cols} grid")
print(export_csv(doc, table.id).decode().rstrip())

# Markup tables express spanning cells with rowspan/colspan; the import
# maps a colspan=2 cell to membership in two columns, which is exactly
# what tuple extraction needs.

markup = b"""<table>
<thead><tr><th rowspan="2">name</th><th colspan="2">score</th></tr>
<tr><th>dev</th><th>test</th></tr></thead>
<tbody><tr><th>base</th><td>0.8</td><td>0.7</td></tr></tbody>
</table>"""
doc = import_html_table(markup)
table = doc.elements_of_kind("table")[0]
for record in extract_semantic_tuples(doc, table.id):
    print(record.render())
print(export_html_table(doc, table.id).decode().rstrip())

# Bounding-box annotation files describe where things are on page images;
# the import keeps the coordinates bit-exact and populates only the
# physical model.

payload = {
    "images": [{"id": 1, "width": 640, "height": 480, "file_name": "scan.png"}],
    "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [10.5, 20.25, 300, 80]}],
    "categories": [{"id": 1, "name": "table"}],
}
doc = import_coco(json.dumps(payload))
element = next(iter(doc.elements.values()))
print(f"\ncoco import: kind={element.kind!r} rect={element.regions[0].shape}")
print(f"canonical file is {len(serialize(doc))} bytes")
