"""Table elements and the deterministic table-understanding pipeline.

A table carries up to four models at once:

* physical: cells with regions, created from located text lines;
* logical: rows and columns as a graph of memberships, or an equivalent
  grid matrix where every cell appears in each slot it spans;
* functional: header/data flags in each cell's data dictionary;
* semantic: tuples of ([row headers], [column headers], [values]).

Specialised element kinds keep their extra fields inside ``data`` under
reserved keys ("n_rows", "n_cols", "grid", "index") so the flat element
map of a document stays uniform.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .errors import IncompleteStructureError, InvalidArgumentError
from .model import (
    Document,
    Element,
    Region,
    add_element,
    region_contains,
    remove_element,
    shape_bbox,
)
from .refgraph import BELONGS_TO
from .semantics import check_confidence

TABLE = "table"
ROW = "row"
COLUMN = "column"
TABLECELL = "tablecell"


class Table(Element):
    kind = TABLE

    @property
    def n_rows(self) -> int | None:
        return self.data.get("n_rows")

    @n_rows.setter
    def n_rows(self, value: int | None) -> None:
        _set_or_del(self.data, "n_rows", value)

    @property
    def n_cols(self) -> int | None:
        return self.data.get("n_cols")

    @n_cols.setter
    def n_cols(self, value: int | None) -> None:
        _set_or_del(self.data, "n_cols", value)

    @property
    def grid(self) -> list[list[list[str]]] | None:
        return self.data.get("grid")

    @grid.setter
    def grid(self, value: list[list[list[str]]] | None) -> None:
        _set_or_del(self.data, "grid", value)


class Row(Element):
    kind = ROW

    @property
    def index(self) -> int | None:
        return self.data.get("index")

    @index.setter
    def index(self, value: int) -> None:
        self.data["index"] = value

    @property
    def temporary(self) -> bool:
        return bool(self.data.get("temporary"))


class Column(Element):
    kind = COLUMN

    @property
    def index(self) -> int | None:
        return self.data.get("index")

    @index.setter
    def index(self, value: int) -> None:
        self.data["index"] = value

    @property
    def temporary(self) -> bool:
        return bool(self.data.get("temporary"))


class TableCell(Element):
    kind = TABLECELL

    @property
    def is_row_header(self) -> bool:
        return bool(self.data.get("is_row_header"))

    @property
    def is_column_header(self) -> bool:
        return bool(self.data.get("is_column_header"))


KIND_CLASSES: dict[str, type[Element]] = {
    TABLE: Table,
    ROW: Row,
    COLUMN: Column,
    TABLECELL: TableCell,
}


def _set_or_del(data: dict, key: str, value) -> None:
    if value is None:
        data.pop(key, None)
    else:
        data[key] = value


@dataclass
class SemanticTuple:
    """One ([row headers], [column headers], [values]) record.

    Every field is a list even when it holds a single string, because a
    value may sit under several stacked headers.
    """

    row_headers: list[str]
    col_headers: list[str]
    values: list[str]

    def render(self) -> str:
        return "⟨[{}],[{}],[{}]⟩".format(
            ",".join(self.row_headers), ",".join(self.col_headers), ",".join(self.values)
        )


# -- structure lookups ---------------------------------------------------


def table_cells(doc: Document, table_id: str) -> list[str]:
    """Identifiers of the table's cells, in creation order."""
    return [
        cid for cid in doc.refgraph.children(table_id, BELONGS_TO)
        if doc.elements.get(cid) is not None and doc.elements[cid].kind == TABLECELL
    ]


def _axis_elements(doc: Document, table_id: str, kind: str) -> list[Element]:
    members = [
        doc.elements[cid] for cid in doc.refgraph.children(table_id, BELONGS_TO)
        if doc.elements.get(cid) is not None and doc.elements[cid].kind == kind
    ]
    return sorted(members, key=lambda el: (el.data.get("index", 0)))


def table_rows(doc: Document, table_id: str) -> list[Element]:
    return _axis_elements(doc, table_id, ROW)


def table_columns(doc: Document, table_id: str) -> list[Element]:
    return _axis_elements(doc, table_id, COLUMN)


def _first_region_2d(element: Element, space_id: str | None = None) -> Region | None:
    for region in element.regions:
        if space_id is not None and region.space != space_id:
            continue
        if len(shape_bbox(region.shape)) == 4:
            return region
    return None


def _cell_interval(element: Element, axis: str, space_id: str | None) -> tuple[float, float]:
    region = _first_region_2d(element, space_id)
    if region is None:
        raise InvalidArgumentError(
            f"cell {element.id!r} has no 2-D region" + (f" in space {space_id!r}" if space_id else "")
        )
    x0, y0, x1, y1 = shape_bbox(region.shape)
    return (y0, y1) if axis == ROW else (x0, x1)


# -- physical -> cells ----------------------------------------------------


def assign_cells_by_region(doc: Document, table_id: str, candidate_ids: list[str]) -> list[str]:
    """Create one cell per candidate element located inside the table region.

    The candidate's content and region are copied onto a new cell that
    becomes a child of the table; candidates outside the region (or in
    other spaces) are left untouched.
    """
    table = doc.get_element(table_id)
    if not table.regions:
        raise InvalidArgumentError(f"table {table_id!r} has no region")
    created: list[str] = []
    for cand_id in candidate_ids:
        candidate = doc.get_element(cand_id)
        hit: Region | None = None
        for table_region in table.regions:
            for cand_region in candidate.regions:
                if cand_region.space != table_region.space:
                    continue
                if region_contains(table_region, cand_region):
                    hit = cand_region
                    break
            if hit is not None:
                break
        if hit is None:
            continue
        cell = TableCell(
            regions=[Region(hit.space, hit.shape)],
            content=candidate.content,
            data={"source": cand_id},
        )
        add_id = _add_child(doc, cell, table_id)
        created.append(add_id)
    return created


def _add_child(doc: Document, element: Element, parent: str) -> str:
    return add_element(doc, element, parents=[parent])


# -- alignment clustering --------------------------------------------------


def cluster_alignment(doc: Document, table_id: str, axis: str, tau: float | None = None) -> list[str]:
    """Group the table's cells into rows or columns by centre alignment.

    ``axis`` is "row" (group horizontally aligned cells by their vertical
    centre) or "column" (group vertically aligned cells).  Cells whose
    centre lies within ``tau`` of a growing cluster's mean join it; the
    default ``tau`` is half the median cell height (rows) or width
    (columns).

    Clusters whose members all straddle at least two other clusters'
    bands are ambiguous: each such cell is placed in its own singleton
    cluster flagged ``temporary: true``, to be merged into its real
    neighbours by resolve_spanning.  Existing rows (or columns) of the
    table are replaced.

    Returns the created element identifiers in coordinate order.
    """
    if axis not in (ROW, COLUMN):
        raise InvalidArgumentError(f"axis must be 'row' or 'column', got {axis!r}")
    table = doc.get_element(table_id)
    cell_ids = table_cells(doc, table_id)
    if not cell_ids:
        raise InvalidArgumentError(f"table {table_id!r} has no cells to cluster")
    space_id = table.regions[0].space if table.regions else None
    if space_id is None:
        region = _first_region_2d(doc.elements[cell_ids[0]])
        space_id = region.space if region is not None else None

    order = {cid: i for i, cid in enumerate(doc.elements)}
    intervals = {cid: _cell_interval(doc.elements[cid], axis, space_id) for cid in cell_ids}
    centers = {cid: (lo + hi) / 2 for cid, (lo, hi) in intervals.items()}
    if tau is None:
        spans = [hi - lo for lo, hi in intervals.values()]
        tau = statistics.median(spans) / 2
    if tau < 0:
        raise InvalidArgumentError("tau must be non-negative")

    # greedy 1-D sweep: a sorted cell joins the running cluster while its
    # centre stays within tau of the cluster mean
    ordered = sorted(cell_ids, key=lambda cid: (centers[cid], order[cid]))
    clusters: list[list[str]] = []
    means: list[float] = []
    for cid in ordered:
        if clusters and abs(centers[cid] - means[-1]) <= tau:
            clusters[-1].append(cid)
            means[-1] = sum(centers[m] for m in clusters[-1]) / len(clusters[-1])
        else:
            clusters.append([cid])
            means.append(centers[cid])

    extents = [
        (min(intervals[m][0] for m in members), max(intervals[m][1] for m in members))
        for members in clusters
    ]

    def crosses(cid: str, own: int) -> bool:
        lo, hi = intervals[cid]
        overlapped = sum(
            1 for k, (elo, ehi) in enumerate(extents)
            if k != own and lo <= ehi and elo <= hi
        )
        return overlapped >= 2

    final: list[tuple[float, int, list[str], bool]] = []
    for k, members in enumerate(clusters):
        if members and all(crosses(cid, k) for cid in members):
            # ambiguous: every member spans other bands, give each its own
            # temporary singleton cluster
            for cid in members:
                final.append((centers[cid], order[cid], [cid], True))
        else:
            final.append((means[k], order[members[0]], members, False))
    final.sort(key=lambda item: (item[0], item[1]))

    # note cells sitting exactly between two permanent cluster centres
    perm_means = [center for center, _, _, temp in final if not temp]
    for center, _, members, temp in final:
        if temp:
            continue
        for cid in members:
            dists = sorted(abs(centers[cid] - m) for m in perm_means)
            if len(dists) >= 2 and dists[0] <= tau and abs(dists[0] - dists[1]) < 1e-9:
                ties = doc.elements[cid].data.setdefault("alignment_ties", [])
                if axis not in ties:
                    ties.append(axis)

    for stale in _axis_elements(doc, table_id, axis):
        remove_element(doc, stale.id)

    cls = Row if axis == ROW else Column
    created: list[str] = []
    for index, (_, _, members, temp) in enumerate(final):
        data: dict = {"index": index}
        if temp:
            data["temporary"] = True
        group_id = _add_child(doc, cls(data=data), table_id)
        for cid in members:
            doc.refgraph.add_edge(group_id, cid, BELONGS_TO)
        created.append(group_id)
    return created


def resolve_spanning(doc: Document, table_id: str) -> None:
    """Convert temporary rows/columns into spanning-cell memberships.

    Each cell of a temporary cluster is attached to every adjacent
    permanent row (or column) whose extent its region overlaps, falling
    back to the nearest one so no cell is left orphaned.  Temporary
    clusters are then removed and the survivors reindexed consecutively.
    The call is a no-op when no temporary clusters remain.
    """
    table = doc.get_element(table_id)
    space_id = table.regions[0].space if table.regions else None
    for axis, lister in ((ROW, table_rows), (COLUMN, table_columns)):
        groups = lister(doc, table_id)
        temps = [g for g in groups if g.data.get("temporary")]
        if not temps:
            continue
        perms = [g for g in groups if not g.data.get("temporary")]

        def extent(group: Element) -> tuple[float, float]:
            members = doc.refgraph.children(group.id, BELONGS_TO)
            spans = [_cell_interval(doc.elements[m], axis, space_id) for m in members]
            if not spans:
                return (0.0, 0.0)
            return (min(lo for lo, _ in spans), max(hi for _, hi in spans))

        perm_extents = {g.id: extent(g) for g in perms}
        for temp in temps:
            below = [g for g in perms if g.data["index"] < temp.data["index"]]
            above = [g for g in perms if g.data["index"] > temp.data["index"]]
            neighbours = [g for g in (below[-1] if below else None, above[0] if above else None) if g]
            for cell_id in doc.refgraph.children(temp.id, BELONGS_TO):
                lo, hi = _cell_interval(doc.elements[cell_id], axis, space_id)
                targets = [
                    g for g in neighbours
                    if perm_extents[g.id][0] <= hi and lo <= perm_extents[g.id][1]
                ]
                if not targets and neighbours:
                    mid = (lo + hi) / 2
                    targets = [min(
                        neighbours,
                        key=lambda g: abs((perm_extents[g.id][0] + perm_extents[g.id][1]) / 2 - mid),
                    )]
                for group in targets:
                    if not doc.refgraph.has_edge(group.id, cell_id, BELONGS_TO):
                        doc.refgraph.add_edge(group.id, cell_id, BELONGS_TO)
        for temp in temps:
            remove_element(doc, temp.id)
        for index, group in enumerate(sorted(perms, key=lambda g: g.data["index"])):
            group.data["index"] = index


# -- grid <-> graph duality ------------------------------------------------


def _memberships_from_graph(doc: Document, table_id: str) -> tuple[dict[str, set[int]], dict[str, set[int]], int, int]:
    rows = table_rows(doc, table_id)
    cols = table_columns(doc, table_id)
    row_index = {r.id: r.data.get("index", i) for i, r in enumerate(rows)}
    col_index = {c.id: c.data.get("index", i) for i, c in enumerate(cols)}
    row_sets: dict[str, set[int]] = {}
    col_sets: dict[str, set[int]] = {}
    for cid in table_cells(doc, table_id):
        parents = doc.refgraph.parents(cid, BELONGS_TO)
        row_sets[cid] = {row_index[p] for p in parents if p in row_index}
        col_sets[cid] = {col_index[p] for p in parents if p in col_index}
    return row_sets, col_sets, len(rows), len(cols)


def grid_from_graph(doc: Document, table_id: str) -> list[list[list[str]]]:
    """Derive the grid matrix from row/column memberships and store it.

    Slot (i, j) lists every cell belonging to both row i and column j, in
    the row's membership order.  Raises IncompleteStructureError when the
    table has no rows/columns or a cell is missing an axis membership.
    """
    table = doc.get_element(table_id)
    rows = table_rows(doc, table_id)
    cols = table_columns(doc, table_id)
    if not rows or not cols:
        raise IncompleteStructureError(f"table {table_id!r} has no row/column structure")
    _check_indices(rows, "row")
    _check_indices(cols, "column")
    col_members: dict[str, set[str]] = {
        c.id: set(doc.refgraph.children(c.id, BELONGS_TO)) for c in cols
    }
    orphans = [
        cid for cid in table_cells(doc, table_id)
        if not any(cid in doc.refgraph.children(r.id, BELONGS_TO) for r in rows)
        or not any(cid in members for members in col_members.values())
    ]
    if orphans:
        raise IncompleteStructureError(
            f"cells missing a row or column membership: {', '.join(orphans)}", tuple(orphans)
        )
    matrix: list[list[list[str]]] = []
    for row in rows:
        row_cells = doc.refgraph.children(row.id, BELONGS_TO)
        matrix.append([[cid for cid in row_cells if cid in col_members[c.id]] for c in cols])
    table.n_rows = len(rows)
    table.n_cols = len(cols)
    table.grid = matrix
    return matrix


def _check_indices(groups: list[Element], what: str) -> None:
    indices = sorted(g.data.get("index") for g in groups)
    if indices != list(range(len(groups))):
        raise InvalidArgumentError(f"{what} indices are not consecutive from 0: {indices}")


def graph_from_grid(doc: Document, table_id: str) -> tuple[list[str], list[str]]:
    """Create Row/Column elements whose memberships mirror the stored grid.

    Every slot a cell occupies becomes a membership; a cell spanning k
    columns therefore ends up with k column parents.  Existing rows and
    columns are replaced.  Raises InvalidArgumentError for a malformed
    grid (ragged, unknown identifiers, or occupancy that is not the
    product of its row and column sets).
    """
    table = doc.get_element(table_id)
    grid = table.grid
    if grid is None:
        raise InvalidArgumentError(f"table {table_id!r} has no grid")
    n_rows = len(grid)
    n_cols = len(grid[0]) if grid else 0
    slots: dict[str, set[tuple[int, int]]] = {}
    for i, row in enumerate(grid):
        if len(row) != n_cols:
            raise InvalidArgumentError(f"grid row {i} has {len(row)} slots, expected {n_cols}")
        for j, slot in enumerate(row):
            if not isinstance(slot, list):
                raise InvalidArgumentError(f"grid slot ({i}, {j}) is not a list")
            for cid in slot:
                el = doc.elements.get(cid)
                if el is None or el.kind != TABLECELL:
                    raise InvalidArgumentError(f"grid references unknown cell {cid!r}")
                slots.setdefault(cid, set()).add((i, j))
    for cid, occupied in slots.items():
        rows_of = {i for i, _ in occupied}
        cols_of = {j for _, j in occupied}
        if occupied != {(i, j) for i in rows_of for j in cols_of}:
            raise InvalidArgumentError(
                f"cell {cid!r} occupancy is not the product of its row and column sets"
            )
    if (table.n_rows is not None and table.n_rows != n_rows) or (
        table.n_cols is not None and table.n_cols != n_cols
    ):
        raise InvalidArgumentError("grid dimensions disagree with n_rows/n_cols")

    for stale in table_rows(doc, table_id) + table_columns(doc, table_id):
        remove_element(doc, stale.id)

    row_ids = [_add_child(doc, Row(data={"index": i}), table_id) for i in range(n_rows)]
    col_ids = [_add_child(doc, Column(data={"index": j}), table_id) for j in range(n_cols)]
    for i, row in enumerate(grid):
        for slot in row:
            for cid in slot:
                if not doc.refgraph.has_edge(row_ids[i], cid, BELONGS_TO):
                    doc.refgraph.add_edge(row_ids[i], cid, BELONGS_TO)
    for j in range(n_cols):
        for i in range(n_rows):
            for cid in grid[i][j]:
                if not doc.refgraph.has_edge(col_ids[j], cid, BELONGS_TO):
                    doc.refgraph.add_edge(col_ids[j], cid, BELONGS_TO)
    table.n_rows = n_rows
    table.n_cols = n_cols
    return row_ids, col_ids


# -- functional model -----------------------------------------------------

ROLES = ("row_header", "column_header", "data")


def mark_functional(doc: Document, cell_id: str, role: str, confidence: float | None = None) -> None:
    """Set a cell's functional role; later calls overwrite earlier ones.

    Roles are exclusive: marking a column header clears the row-header
    flag and vice versa, and the data role clears both.  An optional
    confidence in [0, 1] is stored next to the flag the role sets.
    """
    cell = doc.get_element(cell_id)
    if role not in ROLES:
        raise InvalidArgumentError(f"role must be one of {ROLES}, got {role!r}")
    if confidence is not None:
        confidence = check_confidence(confidence)
        if role == "data":
            raise InvalidArgumentError("a confidence can only accompany a header role")
    cell.data["is_row_header"] = role == "row_header"
    cell.data["is_column_header"] = role == "column_header"
    cell.data.pop("is_row_header_confidence", None)
    cell.data.pop("is_column_header_confidence", None)
    if confidence is not None:
        cell.data[f"is_{role}_confidence"] = confidence


def mark_headers_auto(doc: Document, table_id: str,
                      header_rows: int | None = None, header_cols: int | None = None) -> None:
    """Simple default marking: first row and first column, grown across
    cells that span out of them.

    The column-header band starts as row 0 and absorbs any further row
    reached through a cell spanning out of the band (stacked header rows
    tied together by spanning cells); the row-header band does the same
    from column 0.  Explicit ``header_rows``/``header_cols`` counts
    override the growth.  Every remaining cell is marked data.
    """
    row_sets, col_sets, n_rows, n_cols = _memberships_from_graph(doc, table_id)
    if n_rows == 0 or n_cols == 0:
        raise IncompleteStructureError(f"table {table_id!r} has no row/column structure")

    def band(sets: dict[str, set[int]], count: int | None, total: int) -> set[int]:
        if count is not None:
            return set(range(min(count, total)))
        if total == 0:
            return set()
        members = {0}
        changed = True
        while changed:
            changed = False
            for indices in sets.values():
                if indices & members and not indices <= members:
                    members |= indices
                    changed = True
        return members

    col_header_rows = band(row_sets, header_rows, n_rows)
    row_header_cols = band(col_sets, header_cols, n_cols)
    for cid in table_cells(doc, table_id):
        if row_sets.get(cid, set()) & col_header_rows:
            mark_functional(doc, cid, "column_header")
        elif col_sets.get(cid, set()) & row_header_cols:
            mark_functional(doc, cid, "row_header")
        else:
            mark_functional(doc, cid, "data")


# -- semantic model ---------------------------------------------------------


def _memberships(doc: Document, table_id: str) -> tuple[dict[str, set[int]], dict[str, set[int]]]:
    """Row/column index sets per cell, from the graph or the stored grid."""
    rows = table_rows(doc, table_id)
    cols = table_columns(doc, table_id)
    if rows and cols:
        row_sets, col_sets, _, _ = _memberships_from_graph(doc, table_id)
        return row_sets, col_sets
    table = doc.get_element(table_id)
    grid = table.grid
    if grid is None:
        raise IncompleteStructureError(
            f"table {table_id!r} has neither row/column elements nor a grid"
        )
    row_sets: dict[str, set[int]] = {}
    col_sets: dict[str, set[int]] = {}
    for i, row in enumerate(grid):
        for j, slot in enumerate(row):
            for cid in slot:
                row_sets.setdefault(cid, set()).add(i)
                col_sets.setdefault(cid, set()).add(j)
    return row_sets, col_sets


def extract_semantic_tuples(doc: Document, table_id: str) -> list[SemanticTuple]:
    """One tuple per data cell, ordered row-major by its first slot.

    ``row_headers`` holds the contents of row-header cells sharing any
    row with the data cell, left to right; ``col_headers`` the contents
    of column-header cells sharing any column, top to bottom.  Ordering
    uses region centres when every header has one, falling back to grid
    indices for tables without geometry.  Raises
    IncompleteStructureError when a data cell lacks a row or column
    membership.
    """
    row_sets, col_sets = _memberships(doc, table_id)
    order = {cid: i for i, cid in enumerate(doc.elements)}
    # deterministic creation order, covering grid-only tables too
    cell_ids = sorted(
        set(table_cells(doc, table_id)) | set(row_sets) | set(col_sets),
        key=lambda c: order[c],
    )

    def flags(cid: str) -> tuple[bool, bool]:
        data = doc.elements[cid].data
        return bool(data.get("is_row_header")), bool(data.get("is_column_header"))

    row_headers = [cid for cid in cell_ids if flags(cid)[0]]
    col_headers = [cid for cid in cell_ids if flags(cid)[1]]
    data_cells = [cid for cid in cell_ids if not any(flags(cid))]

    missing = [
        cid for cid in data_cells
        if not row_sets.get(cid) or not col_sets.get(cid)
    ]
    if missing:
        raise IncompleteStructureError(
            f"data cells missing a row or column membership: {', '.join(missing)}",
            tuple(missing),
        )

    def sort_headers(ids: list[str], geometric_axis: int, index_sets: dict[str, set[int]]) -> list[str]:
        centers = {}
        for cid in ids:
            region = _first_region_2d(doc.elements[cid])
            if region is None:
                centers = None
                break
            x0, y0, x1, y1 = shape_bbox(region.shape)
            centers[cid] = (x0 + x1) / 2 if geometric_axis == 0 else (y0 + y1) / 2
        if centers is not None:
            return sorted(ids, key=lambda c: (centers[c], order[c]))
        return sorted(ids, key=lambda c: (min(index_sets[c]), order[c]))

    tuples: list[tuple[tuple[int, int, int], SemanticTuple]] = []
    for cid in data_cells:
        sharing_rows = [h for h in row_headers if row_sets.get(h, set()) & row_sets[cid]]
        sharing_cols = [h for h in col_headers if col_sets.get(h, set()) & col_sets[cid]]
        sharing_rows = sort_headers(sharing_rows, 0, col_sets)
        sharing_cols = sort_headers(sharing_cols, 1, row_sets)
        record = SemanticTuple(
            row_headers=[doc.elements[h].content or "" for h in sharing_rows],
            col_headers=[doc.elements[h].content or "" for h in sharing_cols],
            values=[doc.elements[cid].content or ""],
        )
        tuples.append(((min(row_sets[cid]), min(col_sets[cid]), order[cid]), record))
    tuples.sort(key=lambda item: item[0])
    return [record for _, record in tuples]


# -- consistency across tables ----------------------------------------------


@dataclass(frozen=True)
class ConsistencyFinding:
    axis: str                 # "row" or "column"
    path: tuple[str, ...]     # the header path seen on one side only
    present_in: str           # "a" or "b"

    def __str__(self) -> str:
        return f"{self.axis}-header path [{','.join(self.path)}] only in {self.present_in}"


@dataclass
class ConsistencyReport:
    findings: list[ConsistencyFinding] = field(default_factory=list)

    @property
    def is_consistent(self) -> bool:
        return not self.findings


def consistency_check(tuples_a: list[SemanticTuple], tuples_b: list[SemanticTuple]) -> ConsistencyReport:
    """Compare the header paths of two tuple lists.

    Row-header and column-header paths are compared separately as exact
    string lists after whitespace trimming; the report lists every path
    present on one side but absent from the other.
    """

    def paths(tuples: list[SemanticTuple], axis: str) -> set[tuple[str, ...]]:
        field_name = "row_headers" if axis == "row" else "col_headers"
        return {tuple(s.strip() for s in getattr(t, field_name)) for t in tuples}

    report = ConsistencyReport()
    for axis in ("row", "column"):
        a = paths(tuples_a, axis)
        b = paths(tuples_b, axis)
        for path in sorted(a - b):
            report.findings.append(ConsistencyFinding(axis, path, "a"))
        for path in sorted(b - a):
            report.findings.append(ConsistencyFinding(axis, path, "b"))
    return report
