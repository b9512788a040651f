"""Document container, pages, coordinate spaces, regions, and elements.

A document is a single-writer value: mutate it from one thread at a time
and read it freely once mutation stops.  Nothing here takes locks.

Coordinate convention for 2-D spaces: origin at the top left, y grows
downward, matching image and bounding-box annotation conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConflictError, CycleError, InvalidArgumentError, NotFoundError
from .refgraph import BELONGS_TO, ROOT_ID, ReferenceGraph
from .semantics import SemanticLayer

SCALARS = (str, int, float, bool, type(None))


@dataclass
class Space:
    """A named coordinate system attached to a page.

    ``extent`` holds one positive length per dimension; ``unit`` is a
    free-form label such as "point", "pixel", or "char".
    """

    id: str
    dimensionality: int
    extent: list[float]
    unit: str = ""


@dataclass
class Page:
    id: str
    index: int
    spaces: list[Space]


@dataclass
class Span1D:
    start: float
    end: float


@dataclass
class Rect:
    x: float
    y: float
    width: float
    height: float


@dataclass
class Polygon:
    points: list[tuple[float, float]]


@dataclass
class Polyline:
    points: list[tuple[float, float]]


Shape = Span1D | Rect | Polygon | Polyline


@dataclass
class Region:
    """A geometric shape demarcating a section of one space."""

    space: str
    shape: Shape


class Element:
    """A document entity: a text line, a table, a cell, an image region.

    ``data`` is an open dictionary.  The only restriction is that values
    stay within the JSON scalar/list/map universe so every element
    round-trips losslessly through serialization.
    """

    kind = "element"

    def __init__(self, id: str | None = None, kind: str | None = None,
                 regions: list[Region] | None = None, content: str | None = None,
                 data: dict | None = None):
        self.id = id
        if kind is not None:
            self.kind = kind
        self.regions: list[Region] = list(regions or [])
        self.content = content
        self.data: dict = dict(data or {})
        self.extra: dict = {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.id!r} kind={self.kind!r}>"


class Document:
    """Root container: pages, elements, reference graph, semantic layer."""

    def __init__(self, id: str, metadata: dict | None = None):
        self.id = id
        self.metadata: dict = dict(metadata or {})
        self.pages: list[Page] = []
        self.elements: dict[str, Element] = {}
        self.refgraph = ReferenceGraph(root=ROOT_ID)
        self.semantics = SemanticLayer()
        self.extra: dict = {}
        self._counters: dict[str, int] = {}

    # -- lookups -------------------------------------------------------

    def get_element(self, element_id: str) -> Element:
        try:
            return self.elements[element_id]
        except KeyError:
            raise NotFoundError(f"unknown element: {element_id!r}") from None

    def get_page(self, page_id: str) -> Page:
        for page in self.pages:
            if page.id == page_id:
                return page
        raise NotFoundError(f"unknown page: {page_id!r}")

    def find_space(self, space_id: str) -> Space | None:
        for page in self.pages:
            for space in page.spaces:
                if space.id == space_id:
                    return space
        return None

    def elements_of_kind(self, kind: str) -> list[Element]:
        return [el for el in self.elements.values() if el.kind == kind]

    def generate_id(self, prefix: str = "e") -> str:
        """Next free identifier of the form ``<prefix><n>``."""
        taken = self._taken_ids()
        n = self._counters.get(prefix, 1)
        while f"{prefix}{n}" in taken:
            n += 1
        self._counters[prefix] = n + 1
        return f"{prefix}{n}"

    def _taken_ids(self) -> set[str]:
        taken = set(self.refgraph.nodes())
        taken.update(self.elements)
        for page in self.pages:
            taken.add(page.id)
            taken.update(space.id for space in page.spaces)
        return taken

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        from .serialization import serialize

        return serialize(self) == serialize(other)

    def __repr__(self) -> str:
        return f"<Document {self.id!r}: {len(self.pages)} pages, {len(self.elements)} elements>"


# -- value checks -------------------------------------------------------


def check_data_value(value: object, where: str = "data") -> None:
    """Reject values that would not survive canonical serialization."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidArgumentError(f"{where}: non-finite numbers are not serializable")
        return
    if isinstance(value, (list, tuple)):
        for item in value:
            check_data_value(item, where)
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise InvalidArgumentError(f"{where}: map keys must be strings, got {key!r}")
            check_data_value(item, where)
        return
    raise InvalidArgumentError(f"{where}: unsupported value type {type(value).__name__}")


def check_metadata(metadata: dict) -> None:
    for key, value in metadata.items():
        if not isinstance(key, str):
            raise InvalidArgumentError(f"metadata keys must be strings, got {key!r}")
        if not isinstance(value, SCALARS) or (isinstance(value, float) and not math.isfinite(value)):
            raise InvalidArgumentError(f"metadata values must be scalars, got {value!r}")


def check_space(space: Space) -> None:
    if not space.id:
        raise InvalidArgumentError("space id must be non-empty")
    if space.dimensionality not in (1, 2):
        raise InvalidArgumentError(f"space dimensionality must be 1 or 2, got {space.dimensionality}")
    if len(space.extent) != space.dimensionality:
        raise InvalidArgumentError("space extent length must equal its dimensionality")
    for length in space.extent:
        if not isinstance(length, (int, float)) or isinstance(length, bool) or not length > 0:
            raise InvalidArgumentError(f"space extents must be strictly positive, got {length!r}")


def region_problem(region: Region, space: Space) -> str | None:
    """Why a region is invalid in its space, or None if it is fine."""
    shape = region.shape
    if isinstance(shape, Span1D):
        if space.dimensionality != 1:
            return "Span1D regions require a 1-dimensional space"
        if not 0 <= shape.start <= shape.end <= space.extent[0]:
            return f"span [{shape.start}, {shape.end}] outside extent [0, {space.extent[0]}]"
        return None
    if space.dimensionality != 2:
        return f"{type(shape).__name__} regions require a 2-dimensional space"
    if isinstance(shape, Rect):
        if shape.width < 0 or shape.height < 0:
            return "rect width and height must be non-negative"
        if not (0 <= shape.x and 0 <= shape.y
                and shape.x + shape.width <= space.extent[0]
                and shape.y + shape.height <= space.extent[1]):
            return "rect not fully inside the space extent"
        return None
    if isinstance(shape, Polygon):
        if len(shape.points) < 3:
            return "polygon needs at least 3 points"
        return None
    if isinstance(shape, Polyline):
        if len(shape.points) < 2:
            return "polyline needs at least 2 points"
        return None
    return f"unknown shape type {type(shape).__name__}"


def check_region(region: Region, space: Space) -> None:
    problem = region_problem(region, space)
    if problem is not None:
        raise InvalidArgumentError(problem)


# -- operations ----------------------------------------------------------


def create_document(id: str, metadata: dict | None = None) -> Document:
    """Empty document whose reference graph holds only the virtual root."""
    if not isinstance(id, str) or not id:
        raise InvalidArgumentError("document id must be a non-empty string")
    metadata = dict(metadata or {})
    check_metadata(metadata)
    return Document(id, metadata)


def add_page(doc: Document, spaces: list[Space], page_id: str | None = None) -> str:
    """Append a page with the next consecutive index and link it to the root."""
    if not spaces:
        raise InvalidArgumentError("a page needs at least one space")
    known_spaces = {s.id for p in doc.pages for s in p.spaces}
    batch: set[str] = set()
    for space in spaces:
        check_space(space)
        if space.id in known_spaces or space.id in batch:
            raise ConflictError(f"space id already in use: {space.id!r}")
        batch.add(space.id)
    if page_id is None:
        page_id = doc.generate_id("p")
    if doc.refgraph.has_node(page_id):
        raise ConflictError(f"identifier already in use: {page_id!r}")
    page = Page(page_id, len(doc.pages), list(spaces))
    doc.refgraph.add_node(page_id)
    doc.refgraph.add_edge(ROOT_ID, page_id, BELONGS_TO)
    doc.pages.append(page)
    return page_id


def add_element(doc: Document, element: Element, parents: list[str] | None = None) -> str:
    """Store an element and add one "belongs_to" edge per parent.

    Parents may be elements or pages.  The call is atomic: every
    precondition is checked before the document is touched.
    """
    parents = list(parents or [])
    if element.id is None:
        element.id = doc.generate_id("e")
    if not isinstance(element.id, str) or not element.id:
        raise InvalidArgumentError("element id must be a non-empty string")
    if not isinstance(element.kind, str) or not element.kind:
        raise InvalidArgumentError("element kind must be non-empty")
    if element.content is not None and not isinstance(element.content, str):
        raise InvalidArgumentError("element content must be a string or None")
    check_data_value(element.data, f"element {element.id!r} data")
    for region in element.regions:
        space = doc.find_space(region.space)
        if space is None:
            raise NotFoundError(f"unknown space: {region.space!r}")
        check_region(region, space)
    if doc.refgraph.has_node(element.id):
        raise ConflictError(f"identifier already in use: {element.id!r}")
    seen_parents: set[str] = set()
    for parent in parents:
        if parent == element.id:
            raise CycleError(f"element {element.id!r} cannot be its own parent", (element.id,))
        if not doc.refgraph.has_node(parent):
            raise NotFoundError(f"unknown parent: {parent!r}")
        if parent in seen_parents:
            raise ConflictError(f"duplicate parent: {parent!r}")
        seen_parents.add(parent)
    doc.refgraph.add_node(element.id)
    for parent in parents:
        doc.refgraph.add_edge(parent, element.id, BELONGS_TO)
    doc.elements[element.id] = element
    return element.id


def remove_element(doc: Document, element_id: str) -> None:
    """Delete an element together with every edge incident to it."""
    if element_id not in doc.elements:
        raise NotFoundError(f"unknown element: {element_id!r}")
    doc.refgraph.remove_node(element_id)
    del doc.elements[element_id]


# -- geometry ------------------------------------------------------------


def shape_bbox(shape: Shape) -> tuple[float, float, float, float] | tuple[float, float]:
    """Axis-aligned bounds: (x0, y0, x1, y1) in 2-D, (start, end) in 1-D."""
    if isinstance(shape, Span1D):
        return (shape.start, shape.end)
    if isinstance(shape, Rect):
        return (shape.x, shape.y, shape.x + shape.width, shape.y + shape.height)
    if isinstance(shape, (Polygon, Polyline)):
        xs = [p[0] for p in shape.points]
        ys = [p[1] for p in shape.points]
        return (min(xs), min(ys), max(xs), max(ys))
    raise InvalidArgumentError(f"unknown shape type {type(shape).__name__}")


def region_contains(outer: Region, inner: Region) -> bool:
    """Whether ``inner`` lies fully inside ``outer``.

    Both regions must reference the same space.  Polygons and polylines
    are compared through their bounding boxes; containment is inclusive,
    so every region contains itself.
    """
    if outer.space != inner.space:
        raise InvalidArgumentError(
            f"regions live in different spaces: {outer.space!r} vs {inner.space!r}"
        )
    a = shape_bbox(outer.shape)
    b = shape_bbox(inner.shape)
    if len(a) != len(b):
        raise InvalidArgumentError("cannot compare 1-D and 2-D regions")
    if len(a) == 2:
        return a[0] <= b[0] and b[1] <= a[1]
    return a[0] <= b[0] and a[1] <= b[1] and b[2] <= a[2] and b[3] <= a[3]


def region_center(region: Region) -> float | tuple[float, float]:
    """Geometric centre: rect/span midpoint, vertex centroid for polygons."""
    shape = region.shape
    if isinstance(shape, Span1D):
        return (shape.start + shape.end) / 2
    if isinstance(shape, Rect):
        return (shape.x + shape.width / 2, shape.y + shape.height / 2)
    if isinstance(shape, (Polygon, Polyline)):
        if not shape.points:
            raise InvalidArgumentError("cannot take the centre of an empty point list")
        n = len(shape.points)
        return (sum(p[0] for p in shape.points) / n, sum(p[1] for p in shape.points) / n)
    raise InvalidArgumentError(f"unknown shape type {type(shape).__name__}")
