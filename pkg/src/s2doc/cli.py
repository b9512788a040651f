"""Command-line interface: validation, conversion, the table pipeline,
tuple extraction, annotation, and cross-table consistency checking.

Machine output (tuples, reports, violation lists) goes to standard
output; human-readable summaries and warnings go to standard error, so
the commands pipe safely.  Exit codes: 0 success, 1 validation or
conversion failures, 2 usage/parse errors, 3 internal errors.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .converters import (
    export_csv,
    export_html_table,
    import_coco,
    import_csv,
    import_html_table,
    import_textlines,
)
from .errors import (
    ConversionWarning,
    ExportError,
    IncompleteStructureError,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
    S2DocError,
    ValidationError,
)
from .model import Rect, Region, add_element
from .semantics import annotate
from .serialization import deserialize, serialize
from .tables import (
    Table,
    assign_cells_by_region,
    cluster_alignment,
    consistency_check,
    extract_semantic_tuples,
    grid_from_graph,
    mark_headers_auto,
    resolve_spanning,
    table_cells,
    table_columns,
    table_rows,
)

OK = 0
FAILED = 1
USAGE = 2
INTERNAL = 3


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(USAGE, f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str, payload: bytes) -> None:
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise _Exit(FAILED, f"cannot write {path}: {exc.strerror or exc}") from None


def _load_document(path: str, *, invalid_code: int = FAILED):
    raw = _read(path)
    try:
        return deserialize(raw)
    except ParseError as exc:
        raise _Exit(USAGE, f"{path}: {exc}") from None
    except ValidationError as exc:
        lines = "\n".join(str(v) for v in exc.violations)
        raise _Exit(invalid_code, f"{path} failed validation:\n{lines}") from None


def _select_table(doc, table_id: str | None) -> str:
    tables = doc.elements_of_kind("table")
    if table_id is not None:
        element = doc.elements.get(table_id)
        if element is None or element.kind != "table":
            raise _Exit(USAGE, f"no table with id {table_id!r}")
        return table_id
    if not tables:
        raise _Exit(USAGE, "the document contains no table")
    if len(tables) > 1:
        ids = ", ".join(t.id for t in tables)
        raise _Exit(USAGE, f"the document contains several tables ({ids}); pick one with --table")
    return tables[0].id


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    raw = _read(args.file)
    try:
        deserialize(raw)
    except ParseError as exc:
        raise _Exit(USAGE, f"{args.file}: {exc}") from None
    except ValidationError as exc:
        for violation in exc.violations:
            print(violation)
        return FAILED
    print("OK")
    return OK


_IMPORTERS = {
    "csv": lambda raw, lenient: import_csv(raw, lenient=lenient),
    "tsv": lambda raw, lenient: import_csv(raw, delimiter="\t", lenient=lenient),
    "html": lambda raw, lenient: import_html_table(raw),
    "coco": lambda raw, lenient: import_coco(raw),
    "textlines": lambda raw, lenient: import_textlines(raw),
    "s2doc": lambda raw, lenient: deserialize(raw),
}


def cmd_convert(args) -> int:
    raw = _read(args.input)
    try:
        doc = _IMPORTERS[args.source_format](raw, args.lenient)
    except (ParseError, ValidationError, InvalidArgumentError) as exc:
        raise _Exit(FAILED, f"conversion failed: {exc}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.target_format == "s2doc":
            payload = serialize(doc)
        else:
            table_id = _select_table(doc, args.table)
            try:
                if args.target_format == "csv":
                    payload = export_csv(doc, table_id)
                else:
                    payload = export_html_table(doc, table_id)
            except (ExportError, InvalidArgumentError) as exc:
                raise _Exit(FAILED, f"conversion failed: {exc}") from None
    for warning in caught:
        if issubclass(warning.category, ConversionWarning):
            print(f"warning: {warning.message}", file=sys.stderr)
    _write(args.output, payload)
    return OK


def cmd_pipeline(args) -> int:
    parts = args.table_region.split(",")
    if len(parts) != 5:
        raise _Exit(USAGE, "--table-region must be x,y,w,h,page")
    try:
        x, y, w, h = (float(p) for p in parts[:4])
        page_index = int(parts[4])
    except ValueError:
        raise _Exit(USAGE, f"malformed --table-region: {args.table_region!r}") from None

    raw = _read(args.input)
    try:
        doc = import_textlines(raw)
    except (ParseError, ValidationError) as exc:
        raise _Exit(USAGE, f"{args.input}: {exc}") from None
    if not 0 <= page_index < len(doc.pages):
        raise _Exit(USAGE, f"page index {page_index} out of range (document has {len(doc.pages)} pages)")
    page = doc.pages[page_index]
    space = page.spaces[0]

    table = Table(regions=[Region(space.id, Rect(x, y, w, h))])
    try:
        table_id = add_element(doc, table, parents=[page.id])
    except InvalidArgumentError as exc:
        raise _Exit(USAGE, f"bad table region: {exc}") from None
    candidates = [eid for eid, el in doc.elements.items() if el.kind == "textline"]
    created = assign_cells_by_region(doc, table_id, candidates)
    if not created:
        raise _Exit(FAILED, "no text lines inside the table region")

    cluster_alignment(doc, table_id, "row", tau=args.tau)
    cluster_alignment(doc, table_id, "column", tau=args.tau)
    resolve_spanning(doc, table_id)
    grid_from_graph(doc, table_id)
    mark_headers_auto(doc, table_id, header_rows=args.header_rows, header_cols=args.header_cols)
    tuples = extract_semantic_tuples(doc, table_id)
    table.data["semantic_tuples"] = [
        [t.row_headers, t.col_headers, t.values] for t in tuples
    ]
    _write(args.output, serialize(doc))
    print(
        f"table {table_id}: {len(table_rows(doc, table_id))} rows, "
        f"{len(table_columns(doc, table_id))} columns, "
        f"{len(table_cells(doc, table_id))} cells",
        file=sys.stderr,
    )
    return OK


def cmd_extract(args) -> int:
    doc = _load_document(args.file)
    table_id = _select_table(doc, args.table)
    try:
        tuples = extract_semantic_tuples(doc, table_id)
    except IncompleteStructureError as exc:
        raise _Exit(FAILED, f"incomplete table structure: {exc}") from None
    for record in tuples:
        print(record.render())
    return OK


def cmd_annotate(args) -> int:
    doc = _load_document(args.file)
    node_id = args.concept if args.concept is not None else args.entity
    if args.concept is not None and args.concept not in doc.semantics.kg.concepts:
        raise _Exit(USAGE, f"unknown concept: {args.concept!r}")
    if args.entity is not None and args.entity not in doc.semantics.kg.entities:
        raise _Exit(USAGE, f"unknown entity: {args.entity!r}")
    try:
        annotate(doc, args.element, node_id, args.confidence)
    except (NotFoundError, InvalidArgumentError, S2DocError) as exc:
        raise _Exit(USAGE, str(exc)) from None
    _write(args.output or args.file, serialize(doc))
    return OK


def cmd_consistency(args) -> int:
    doc_a = _load_document(args.file_a)
    doc_b = _load_document(args.file_b)
    table_a = _select_table(doc_a, args.table_a)
    table_b = _select_table(doc_b, args.table_b)
    try:
        tuples_a = extract_semantic_tuples(doc_a, table_a)
        tuples_b = extract_semantic_tuples(doc_b, table_b)
    except IncompleteStructureError as exc:
        raise _Exit(FAILED, f"incomplete table structure: {exc}") from None
    report = consistency_check(tuples_a, tuples_b)
    for finding in report.findings:
        print(finding)
    return OK if report.is_consistent else FAILED


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s2doc",
        description="Validate, convert, and analyse multi-layer table documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document file against every invariant")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("convert", help="convert between supported formats")
    p.add_argument("--from", dest="source_format", required=True,
                   choices=["csv", "tsv", "html", "coco", "textlines", "s2doc"])
    p.add_argument("--to", dest="target_format", required=True,
                   choices=["s2doc", "csv", "html"])
    p.add_argument("--table", help="table id for table-level exports")
    p.add_argument("--lenient", action="store_true",
                   help="pad ragged delimited rows instead of failing")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("pipeline", help="run table understanding over located text lines")
    p.add_argument("input", help="text-line JSON file")
    p.add_argument("--table-region", required=True, metavar="X,Y,W,H,PAGE")
    p.add_argument("--tau", type=float, default=None, help="alignment tolerance")
    p.add_argument("--header-rows", type=int, default=None,
                   help="mark the first N rows as column headers")
    p.add_argument("--header-cols", type=int, default=None,
                   help="mark the first N columns as row headers")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_pipeline)

    p = sub.add_parser("extract", help="print one semantic tuple per data cell")
    p.add_argument("file")
    p.add_argument("--table")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("annotate", help="tie an element to a knowledge graph node")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--concept")
    group.add_argument("--entity")
    p.add_argument("--confidence", type=float, default=None)
    p.add_argument("-o", "--output", help="write here instead of rewriting the input")
    p.set_defaults(handler=cmd_annotate)

    p = sub.add_parser("consistency", help="compare the semantic models of two tables")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--table-a")
    p.add_argument("--table-b")
    p.set_defaults(handler=cmd_consistency)

    return parser


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _Exit as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except S2DocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL


def entrypoint() -> None:
    sys.exit(main())
