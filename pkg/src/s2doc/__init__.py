"""Multi-layer document and table data model.

One format carries five views of the same table: the physical layout
(located cells), the logical arrangement (rows/columns as a graph or a
grid), the functional roles (header vs. data), the semantic tuples, and
an ontological annotation layer tying elements to a knowledge graph.
"""

from .errors import (
    ConflictError,
    ConversionWarning,
    CycleError,
    ExportError,
    IncompleteStructureError,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
    S2DocError,
    ValidationError,
    Violation,
)
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
    add_element,
    add_page,
    create_document,
    region_center,
    region_contains,
    remove_element,
)
from .refgraph import BELONGS_TO, ROOT_ID, ReferenceGraph
from .semantics import (
    Annotation,
    Literal,
    SemanticConcept,
    SemanticEntity,
    SemanticKnowledgeGraph,
    SemanticLayer,
    SemanticRelationship,
    annotate,
    annotations_of,
    clone_graph_for,
    disambiguate_by_context,
)
from .serialization import FORMAT_VERSION, deserialize, serialize
from .tables import (
    Column,
    ConsistencyFinding,
    ConsistencyReport,
    Row,
    SemanticTuple,
    Table,
    TableCell,
    assign_cells_by_region,
    cluster_alignment,
    consistency_check,
    extract_semantic_tuples,
    graph_from_grid,
    grid_from_graph,
    mark_functional,
    mark_headers_auto,
    resolve_spanning,
    table_cells,
    table_columns,
    table_rows,
)
from .validate import validate_document
from .converters import (
    export_csv,
    export_html_table,
    import_coco,
    import_csv,
    import_html_table,
    import_textlines,
)

__version__ = "0.1.0"
