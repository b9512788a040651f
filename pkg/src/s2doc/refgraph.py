"""Labelled directed acyclic graph over pages and elements.

Acyclicity is enforced per edge label: a "reading_order" edge may point
backwards relative to "belongs_to" containment without either label ever
containing a cycle.  Edge insertion order is preserved because the order
of a row's or column's cells is meaningful.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Iterator

from .errors import ConflictError, CycleError, InvalidArgumentError, NotFoundError, Violation

ROOT_ID = "root"
BELONGS_TO = "belongs_to"

Edge = tuple[str, str, str]


class ReferenceGraph:
    """Nodes are identifiers; edges are (source, target, label) triples."""

    def __init__(self, root: str | None = None):
        self._nodes: dict[str, int] = {}
        self._edges: list[Edge] = []
        self._edge_set: set[Edge] = set()
        self._out: dict[str, dict[str, list[str]]] = {}
        self._in: dict[str, dict[str, list[str]]] = {}
        self.root = root
        if root is not None:
            self._add_node_unchecked(root)

    # -- nodes ---------------------------------------------------------

    def has_node(self, node: str) -> bool:
        return node in self._nodes

    def nodes(self) -> list[str]:
        """All node identifiers in insertion order."""
        return list(self._nodes)

    def add_node(self, node: str) -> None:
        if not isinstance(node, str) or not node:
            raise InvalidArgumentError("node identifier must be a non-empty string")
        if node in self._nodes:
            raise ConflictError(f"node already exists: {node!r}")
        self._add_node_unchecked(node)

    def _add_node_unchecked(self, node: str) -> None:
        if node not in self._nodes:
            self._nodes[node] = len(self._nodes)

    def remove_node(self, node: str) -> None:
        """Remove a node and every edge incident to it, under any label."""
        if node not in self._nodes:
            raise NotFoundError(f"unknown node: {node!r}")
        keep = [e for e in self._edges if e[0] != node and e[1] != node]
        del self._nodes[node]
        self._rebuild_edges(keep)

    # -- edges ---------------------------------------------------------

    def edges(self, label: str | None = None) -> Iterator[Edge]:
        for e in self._edges:
            if label is None or e[2] == label:
                yield e

    def has_edge(self, source: str, target: str, label: str = BELONGS_TO) -> bool:
        return (source, target, label) in self._edge_set

    def add_edge(self, source: str, target: str, label: str = BELONGS_TO) -> None:
        """Insert an edge, refusing anything that would break an invariant.

        Raises NotFoundError for unknown endpoints, ConflictError for a
        duplicate triple, and CycleError when the edge would close a cycle
        within its own label.
        """
        if not label:
            raise InvalidArgumentError("edge label must be non-empty")
        for node in (source, target):
            if node not in self._nodes:
                raise NotFoundError(f"unknown node: {node!r}")
        if self.root is not None and target == self.root:
            raise InvalidArgumentError("the virtual root cannot be an edge target")
        triple = (source, target, label)
        if triple in self._edge_set:
            raise ConflictError(f"duplicate edge: {triple}")
        if source == target or self._reachable(target, source, label):
            raise CycleError(
                f"edge {source!r} -> {target!r} closes a cycle within label {label!r}",
                nodes=(source, target),
            )
        self._add_edge_unchecked(source, target, label)

    def _add_edge_unchecked(self, source: str, target: str, label: str) -> None:
        self._edges.append((source, target, label))
        self._edge_set.add((source, target, label))
        self._out.setdefault(label, {}).setdefault(source, []).append(target)
        self._in.setdefault(label, {}).setdefault(target, []).append(source)

    def remove_edge(self, source: str, target: str, label: str = BELONGS_TO) -> None:
        triple = (source, target, label)
        if triple not in self._edge_set:
            raise NotFoundError(f"no such edge: {triple}")
        keep = [e for e in self._edges if e != triple]
        self._rebuild_edges(keep)

    def _rebuild_edges(self, edges: list[Edge]) -> None:
        self._edges = []
        self._edge_set = set()
        self._out = {}
        self._in = {}
        for s, t, l in edges:
            self._add_edge_unchecked(s, t, l)

    def _reachable(self, start: str, goal: str, label: str) -> bool:
        out = self._out.get(label, {})
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == goal:
                return True
            for nxt in out.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return False

    # -- queries -------------------------------------------------------

    def parents(self, node: str, label: str = BELONGS_TO) -> list[str]:
        """Sources of in-edges with the given label, in insertion order."""
        if node not in self._nodes:
            raise NotFoundError(f"unknown node: {node!r}")
        return list(self._in.get(label, {}).get(node, ()))

    def children(self, node: str, label: str = BELONGS_TO) -> list[str]:
        """Targets of out-edges with the given label, in insertion order."""
        if node not in self._nodes:
            raise NotFoundError(f"unknown node: {node!r}")
        return list(self._out.get(label, {}).get(node, ()))

    def labels(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, _, label in self._edges:
            seen.setdefault(label)
        return list(seen)

    def topological_order(self, label: str = BELONGS_TO) -> list[str]:
        """Every node, each edge source before its target, ties broken by
        node insertion order.

        Raises CycleError when the label's edge set is cyclic, which can
        only happen to graphs rebuilt from untrusted input.
        """
        indegree = {node: 0 for node in self._nodes}
        out = self._out.get(label, {})
        for targets in out.values():
            for t in targets:
                if t in indegree:
                    indegree[t] += 1
        ready = [self._nodes[n] for n, d in indegree.items() if d == 0]
        heapq.heapify(ready)
        by_seq = {seq: node for node, seq in self._nodes.items()}
        order: list[str] = []
        while ready:
            node = by_seq[heapq.heappop(ready)]
            order.append(node)
            for t in out.get(node, ()):
                if t not in indegree:
                    continue
                indegree[t] -= 1
                if indegree[t] == 0:
                    heapq.heappush(ready, self._nodes[t])
        if len(order) != len(self._nodes):
            remaining = tuple(n for n in self._nodes if n not in set(order))
            raise CycleError(
                f"cycle within label {label!r} involving nodes: {', '.join(remaining)}",
                nodes=remaining,
            )
        return order

    # -- validation ----------------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every graph invariant; returns one violation per problem."""
        violations: list[Violation] = []
        seen: set[Edge] = set()
        for edge in self._edges:
            if edge in seen:
                violations.append(
                    Violation("duplicate-edge", f"edge appears more than once: {edge}", edge[:2])
                )
            seen.add(edge)
            for endpoint in edge[:2]:
                if endpoint not in self._nodes:
                    violations.append(
                        Violation(
                            "dangling-reference",
                            f"edge {edge} references unknown node {endpoint!r}",
                            (endpoint,),
                        )
                    )
            if self.root is not None and edge[1] == self.root:
                violations.append(
                    Violation("root-in-edge", f"virtual root is the target of edge {edge}", edge[:2])
                )
        for label in self.labels():
            try:
                self.topological_order(label)
            except CycleError as exc:
                violations.append(Violation("cycle", str(exc), exc.nodes))
        return violations
