"""Converters between common tabular/layout formats and the document model.

All converters are pure functions of their input.  CSV/TSV populate only
the logical model (the source has no geometry), HTML additionally maps
rowspan/colspan to multi-parent memberships, and bounding-box annotation
files populate only the physical model.
"""

from __future__ import annotations

import csv
import html as html_lib
import io
import json
import warnings
from html.parser import HTMLParser

from .errors import (
    ConversionWarning,
    ExportError,
    InvalidArgumentError,
    ParseError,
    ValidationError,
    Violation,
)
from .model import (
    Document,
    Element,
    Rect,
    Region,
    Space,
    add_element,
    add_page,
    create_document,
)
from .tables import (
    Table,
    TableCell,
    graph_from_grid,
    mark_functional,
    table_columns,
    table_rows,
)

CSV_DIALECT = {"delimiter": ",", "quotechar": '"'}
TSV_DIALECT = {"delimiter": "\t", "quotechar": '"'}


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}", offset=exc.start) from None
    return data


# -- CSV / TSV ---------------------------------------------------------------


def import_csv(data: bytes | str, *, delimiter: str = ",", quotechar: str = '"',
               lenient: bool = False, doc_id: str = "csv-import") -> Document:
    """Parse delimited text into a document holding one grid-modelled table.

    The page carries a 1-D character space; cells get no regions because
    the format encodes no geometry.  Ragged rows raise ParseError with
    the offending 1-based row number unless ``lenient`` pads them with
    empty cells.
    """
    text = _decode(data)
    try:
        rows = list(csv.reader(io.StringIO(text), delimiter=delimiter, quotechar=quotechar))
    except csv.Error as exc:
        raise ParseError(f"csv parse failure: {exc}") from None
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        if not lenient:
            expected = len(rows[0])
            for number, row in enumerate(rows, start=1):
                if len(row) != expected:
                    raise ParseError(
                        f"row {number} has {len(row)} fields, expected {expected}", row=number
                    )
        width = max(widths)
        rows = [r + [""] * (width - len(r)) for r in rows]

    doc = create_document(doc_id)
    space = Space("chars", 1, [max(1, len(text))], "char")
    page_id = add_page(doc, [space])
    table = Table()
    table_id = add_element(doc, table, parents=[page_id])
    grid: list[list[list[str]]] = []
    for row in rows:
        slots = []
        for value in row:
            cid = add_element(doc, TableCell(content=value), parents=[table_id])
            slots.append([cid])
        grid.append(slots)
    table.n_rows = len(rows)
    table.n_cols = len(rows[0]) if rows else 0
    table.grid = grid
    return doc


def export_csv(doc: Document, table_id: str, *, delimiter: str = ",", quotechar: str = '"') -> bytes:
    """One line per grid row; a spanning cell's content repeats in every
    slot it occupies, with the loss reported on the warning channel."""
    matrix = _occupancy(doc, table_id)
    spanning = sorted({cid for row in matrix for slot in row for cid in slot
                       if sum(slot2.count(cid) for row2 in matrix for slot2 in row2) > 1})
    if spanning:
        warnings.warn(
            f"spanning cells flattened on CSV export: {', '.join(spanning)}",
            ConversionWarning,
            stacklevel=2,
        )
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=delimiter, quotechar=quotechar, lineterminator="\n")
    for row in matrix:
        writer.writerow(
            [" ".join(doc.elements[cid].content or "" for cid in slot) for slot in row]
        )
    return buffer.getvalue().encode("utf-8")


def _occupancy(doc: Document, table_id: str) -> list[list[list[str]]]:
    """The table's slot matrix, from the stored grid or its row/column graph."""
    table = doc.get_element(table_id)
    grid = table.data.get("grid")
    if grid is not None:
        return grid
    rows = table_rows(doc, table_id)
    cols = table_columns(doc, table_id)
    if not rows or not cols:
        raise InvalidArgumentError(f"table {table_id!r} has neither a grid nor row/column structure")
    col_members = {c.id: set(doc.refgraph.children(c.id)) for c in cols}
    return [
        [[cid for cid in doc.refgraph.children(r.id) if cid in col_members[c.id]] for c in cols]
        for r in rows
    ]


# -- HTML tables --------------------------------------------------------------


class _Cell:
    __slots__ = ("text", "colspan", "rowspan", "header", "first_in_row", "in_thead")

    def __init__(self, colspan: int, rowspan: int, header: bool, first_in_row: bool, in_thead: bool):
        self.text: list[str] = []
        self.colspan = colspan
        self.rowspan = rowspan
        self.header = header
        self.first_in_row = first_in_row
        self.in_thead = in_thead


_STRUCTURE_TAGS = {"table", "thead", "tbody", "tfoot", "tr", "td", "th", "caption", "colgroup", "col"}


class _TableMarkupParser(HTMLParser):
    """Strict parser for a single table subtree; anything else is rejected."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.rows: list[list[_Cell]] = []
        self.table_open = False
        self.table_seen = False
        self.section = ""
        self.in_caption = False
        self.row: list[_Cell] | None = None
        self.cell: _Cell | None = None

    def _fail(self, message: str):
        raise ParseError(f"{message} (line {self.getpos()[0]})")

    def handle_starttag(self, tag, attrs):
        if self.cell is not None:
            return  # inline markup inside a cell is flattened to text
        if tag == "table":
            if self.table_seen:
                self._fail("only a single table subtree is supported")
            self.table_open = True
            self.table_seen = True
            return
        if not self.table_open:
            self._fail(f"markup outside a table: <{tag}>")
        if tag in ("thead", "tbody", "tfoot"):
            self.section = tag
        elif tag == "caption":
            self.in_caption = True
        elif tag == "tr":
            self.row = []
        elif tag in ("td", "th"):
            if self.row is None:
                self._fail(f"<{tag}> outside a table row")
            self.cell = _Cell(
                colspan=self._span(attrs, "colspan"),
                rowspan=self._span(attrs, "rowspan"),
                header=tag == "th",
                first_in_row=not self.row,
                in_thead=self.section == "thead",
            )
        elif tag in ("colgroup", "col"):
            pass
        else:
            self._fail(f"unsupported tag in table markup: <{tag}>")

    def _span(self, attrs, name: str) -> int:
        for key, value in attrs:
            if key == name:
                try:
                    span = int(value)
                except (TypeError, ValueError):
                    self._fail(f"non-numeric {name}: {value!r}")
                if span < 1:
                    self._fail(f"{name} must be at least 1, got {span}")
                return span
        return 1

    def handle_endtag(self, tag):
        if tag in ("td", "th") and self.cell is not None:
            self.row.append(self.cell)
            self.cell = None
        elif tag == "tr" and self.row is not None:
            self.rows.append(self.row)
            self.row = None
        elif tag in ("thead", "tbody", "tfoot"):
            self.section = ""
        elif tag == "caption":
            self.in_caption = False
        elif tag == "table":
            self.table_open = False

    def handle_data(self, data):
        if self.cell is not None:
            self.cell.text.append(data)
        elif not self.in_caption and data.strip():
            self._fail("text outside table cells")


def import_html_table(data: bytes | str, *, doc_id: str = "html-import") -> Document:
    """Parse table markup, mapping rowspan/colspan to multi-parent cells.

    A cell with colspan k becomes a member of k columns (and likewise for
    rowspan), bridging the row-based markup to the multi-parent logical
    model.  Header-tagged cells are marked column headers inside a header
    section, otherwise row headers when first in their row.  Only a table
    subtree is accepted; full-page markup raises ParseError.
    """
    text = _decode(data)
    parser = _TableMarkupParser()
    try:
        parser.feed(text)
        parser.close()
    except ParseError:
        raise
    if not parser.table_seen:
        raise ParseError("no table markup found")
    if parser.table_open:
        raise ParseError("unclosed table markup")

    # standard occupancy sweep: cells fill leftmost free slots, spans block
    # the slots beneath and beside them
    occupied: dict[tuple[int, int], _Cell] = {}
    placements: list[tuple[_Cell, int, int]] = []
    for r, row in enumerate(parser.rows):
        c = 0
        for cell in row:
            while (r, c) in occupied:
                c += 1
            placements.append((cell, r, c))
            for dr in range(cell.rowspan):
                for dc in range(cell.colspan):
                    occupied[(r + dr, c + dc)] = cell
            c += cell.colspan
    n_rows = max((r for r, _ in occupied), default=-1) + 1
    n_cols = max((c for _, c in occupied), default=-1) + 1

    doc = create_document(doc_id)
    space = Space("chars", 1, [max(1, len(text))], "char")
    page_id = add_page(doc, [space])
    table = Table()
    table_id = add_element(doc, table, parents=[page_id])

    grid: list[list[list[str]]] = [[[] for _ in range(n_cols)] for _ in range(n_rows)]
    ids: dict[int, str] = {}
    for cell, r, c in placements:
        content = " ".join("".join(cell.text).split())
        cid = add_element(doc, TableCell(content=content), parents=[table_id])
        ids[id(cell)] = cid
        for dr in range(cell.rowspan):
            for dc in range(cell.colspan):
                if r + dr < n_rows and c + dc < n_cols:
                    grid[r + dr][c + dc].append(cid)
    table.n_rows = n_rows
    table.n_cols = n_cols
    table.grid = grid
    graph_from_grid(doc, table_id)
    for cell, _, _ in placements:
        if not cell.header:
            continue
        if cell.in_thead:
            mark_functional(doc, ids[id(cell)], "column_header")
        elif cell.first_in_row:
            mark_functional(doc, ids[id(cell)], "row_header")
    return doc


def export_html_table(doc: Document, table_id: str) -> bytes:
    """Reverse the HTML mapping, computing spans from contiguous occupancy.

    Occupancy that no rowspan/colspan can express (non-rectangular cells
    or slots shared by two cells) raises ExportError listing the
    offending cells.
    """
    matrix = _occupancy(doc, table_id)
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    slots: dict[str, list[tuple[int, int]]] = {}
    shared = sorted({
        cid for row in matrix for slot in row for cid in slot if len(slot) > 1
    })
    if shared:
        raise ExportError(
            f"slots holding several cells cannot be expressed: {', '.join(shared)}",
            tuple(shared),
        )
    for i, row in enumerate(matrix):
        for j, slot in enumerate(row):
            for cid in slot:
                slots.setdefault(cid, []).append((i, j))
    bad = []
    anchors: dict[tuple[int, int], tuple[str, int, int]] = {}
    for cid, occupied in slots.items():
        rows_of = sorted({i for i, _ in occupied})
        cols_of = sorted({j for _, j in occupied})
        rectangular = (
            rows_of == list(range(rows_of[0], rows_of[-1] + 1))
            and cols_of == list(range(cols_of[0], cols_of[-1] + 1))
            and len(occupied) == len(rows_of) * len(cols_of)
        )
        if not rectangular:
            bad.append(cid)
            continue
        anchors[(rows_of[0], cols_of[0])] = (cid, len(rows_of), len(cols_of))
    if bad:
        bad.sort()
        raise ExportError(
            f"cells with non-rectangular occupancy: {', '.join(bad)}", tuple(bad)
        )

    def is_header_row(i: int) -> bool:
        ids = {cid for slot in matrix[i] for cid in slot}
        return bool(ids) and all(
            doc.elements[cid].data.get("is_column_header") for cid in ids
        )

    head_rows = 0
    while head_rows < n_rows and is_header_row(head_rows):
        head_rows += 1

    def render_row(i: int) -> str:
        parts = ["<tr>"]
        for j in range(n_cols):
            if not matrix[i][j]:
                parts.append("<td></td>")
                continue
            anchor = anchors.get((i, j))
            if anchor is None:
                continue  # covered by a span anchored earlier
            cid, rowspan, colspan = anchor
            element = doc.elements[cid]
            tag = "th" if (
                element.data.get("is_column_header") or element.data.get("is_row_header")
            ) else "td"
            attrs = ""
            if rowspan > 1:
                attrs += f' rowspan="{rowspan}"'
            if colspan > 1:
                attrs += f' colspan="{colspan}"'
            parts.append(f"<{tag}{attrs}>{html_lib.escape(element.content or '')}</{tag}>")
        parts.append("</tr>")
        return "".join(parts)

    lines = ["<table>"]
    if head_rows:
        lines.append("<thead>")
        lines.extend(render_row(i) for i in range(head_rows))
        lines.append("</thead>")
    lines.append("<tbody>")
    lines.extend(render_row(i) for i in range(head_rows, n_rows))
    lines.append("</tbody>")
    lines.append("</table>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- bounding-box annotation files (COCO layout) ------------------------------


def import_coco(data: bytes | str, *, doc_id: str = "coco-import") -> Document:
    """One page per image, one element per annotation, physical model only.

    Expects the standard field names: images[].id/width/height/file_name,
    annotations[].image_id/category_id/bbox, categories[].id/name.  Bbox
    coordinates are carried over bit-exactly.
    """
    text = _decode(data)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from None
    if not isinstance(payload, dict) or not isinstance(payload.get("images"), list):
        raise ValidationError([Violation("coco-schema", "missing images array")])
    images = payload["images"]
    annotations = payload.get("annotations", [])
    categories = {c.get("id"): c.get("name", "") for c in payload.get("categories", [])}

    violations: list[Violation] = []
    image_ids = set()
    for image in images:
        if not isinstance(image, dict) or "id" not in image:
            violations.append(Violation("coco-schema", f"malformed image entry: {image!r}"))
            continue
        image_ids.add(image["id"])
        if not (isinstance(image.get("width"), (int, float)) and image.get("width", 0) > 0
                and isinstance(image.get("height"), (int, float)) and image.get("height", 0) > 0):
            violations.append(
                Violation("coco-schema", f"image {image['id']!r} has no positive width/height")
            )
    for ann in annotations:
        if not isinstance(ann, dict):
            violations.append(Violation("coco-schema", f"malformed annotation entry: {ann!r}"))
            continue
        if ann.get("image_id") not in image_ids:
            violations.append(
                Violation(
                    "dangling-reference",
                    f"annotation references missing image id {ann.get('image_id')!r}",
                    (str(ann.get("image_id")),),
                )
            )
        bbox = ann.get("bbox")
        if (not isinstance(bbox, list) or len(bbox) != 4
                or any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in bbox)):
            violations.append(Violation("coco-schema", f"malformed bbox: {bbox!r}"))
        elif any(v < 0 for v in bbox):
            violations.append(Violation("coco-bbox", f"negative bbox: {bbox}"))
        if categories and ann.get("category_id") not in categories:
            violations.append(
                Violation(
                    "dangling-reference",
                    f"annotation references missing category id {ann.get('category_id')!r}",
                    (str(ann.get("category_id")),),
                )
            )
    if violations:
        raise ValidationError(violations)

    doc = create_document(doc_id)
    pages: dict[object, str] = {}
    for position, image in enumerate(images):
        space = Space(f"img{image['id']}", 2, [image["width"], image["height"]], "pixel")
        page_id = add_page(doc, [space], page_id=f"p{position}")
        pages[image["id"]] = page_id
        if image.get("file_name"):
            doc.metadata[f"image:{page_id}"] = image["file_name"]
    for ann in annotations:
        x, y, w, h = ann["bbox"]
        image_id = ann["image_id"]
        kind = categories.get(ann.get("category_id"), "annotation") or "annotation"
        element = Element(
            id=f"a{ann['id']}" if "id" in ann else None,
            kind=kind,
            regions=[Region(f"img{image_id}", Rect(x, y, w, h))],
            data={"category_id": ann.get("category_id")},
        )
        space = doc.find_space(f"img{image_id}")
        if x + w > space.extent[0] or y + h > space.extent[1]:
            raise ValidationError(
                [Violation("coco-bbox", f"bbox {ann['bbox']} exceeds image {image_id!r} bounds")]
            )
        add_element(doc, element, parents=[pages[image_id]])
    return doc


# -- text-line input -----------------------------------------------------------


def import_textlines(data: bytes | str | dict, *, doc_id: str | None = None) -> Document:
    """Build the physical model from located text lines.

    The input is a map (or JSON bytes) of the form::

        {"id": "...", "metadata": {...},
         "pages": [{"spaces": [{"id", "dimensionality", "extent", "unit"}],
                    "lines": [{"content": "...", "space": "...",
                               "rect": [x, y, w, h]}, ...]}, ...]}

    ``space`` may be omitted when the page has exactly one space.  A rect
    outside its space extent raises ValidationError naming the entry.
    """
    if isinstance(data, (bytes, str)):
        text = _decode(data)
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from None
    else:
        payload = data
    if not isinstance(payload, dict):
        raise ValidationError([Violation("textlines-schema", "top level is not a map")])

    doc = create_document(doc_id or payload.get("id") or "textlines-import",
                          payload.get("metadata") or {})
    for page_no, raw_page in enumerate(payload.get("pages", [])):
        spaces = [
            Space(
                id=raw.get("id", f"pg{page_no}"),
                dimensionality=raw.get("dimensionality", 2),
                extent=list(raw.get("extent", ())),
                unit=raw.get("unit", ""),
            )
            for raw in raw_page.get("spaces", [])
        ]
        page_id = add_page(doc, spaces)
        for line_no, raw_line in enumerate(raw_page.get("lines", [])):
            where = f"pages[{page_no}].lines[{line_no}]"
            space_id = raw_line.get("space") or (spaces[0].id if len(spaces) == 1 else None)
            if space_id is None or doc.find_space(space_id) is None:
                raise ValidationError(
                    [Violation("textlines-schema", f"{where}: unknown space {space_id!r}")]
                )
            rect = raw_line.get("rect")
            if not isinstance(rect, list) or len(rect) != 4:
                raise ValidationError(
                    [Violation("textlines-schema", f"{where}: rect must be [x, y, w, h]")]
                )
            space = doc.find_space(space_id)
            x, y, w, h = rect
            if not (0 <= x and 0 <= y and w >= 0 and h >= 0
                    and x + w <= space.extent[0] and y + h <= space.extent[1]):
                raise ValidationError(
                    [Violation("region-bounds", f"{where}: rect {rect} outside space extent")]
                )
            add_element(
                doc,
                Element(
                    kind="textline",
                    regions=[Region(space_id, Rect(x, y, w, h))],
                    content=raw_line.get("content", ""),
                ),
                parents=[page_id],
            )
    return doc
