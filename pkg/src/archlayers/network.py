"""Directed dependency network of program elements."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import DuplicateNodeError, SelfDependencyError, UnknownNodeError


class ElementKind(str, Enum):
    CLASS = "class"
    INTERFACE = "interface"
    PACKAGE = "package"
    LAYER = "layer"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, value: str | None) -> "ElementKind":
        try:
            return cls(str(value).lower())
        except ValueError:
            return cls.UNKNOWN


class EdgeKind(str, Enum):
    EXTENDS = "extends"
    IMPLEMENTS = "implements"
    IMPORTS = "imports"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, value: str | None) -> "EdgeKind":
        try:
            return cls(str(value).lower())
        except ValueError:
            return cls.UNKNOWN


@dataclass(frozen=True)
class ProgramElement:
    id: str
    name: str
    kind: ElementKind = ElementKind.UNKNOWN

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        if not self.name:
            raise ValueError("element name must be non-empty")


@dataclass(frozen=True)
class DependencyEdge:
    source: str
    target: str
    kind: EdgeKind = EdgeKind.UNKNOWN


_DIGITS = re.compile(r"\d+")


def node_sort_key(node_id: str):
    """Natural ordering for node ids: numeric ids numerically, then the rest."""
    if _DIGITS.fullmatch(node_id):
        return (0, int(node_id), "")
    return (1, 0, node_id)


class DependencyNetwork:
    """A simple directed graph keyed by node id.

    Self-loops are rejected and parallel edges collapse onto the first one
    added (its kind is kept). Nodes iterate in insertion order.
    """

    def __init__(self) -> None:
        self._nodes: dict[str, ProgramElement] = {}
        self._out: dict[str, dict[str, EdgeKind]] = {}
        self._in: dict[str, dict[str, EdgeKind]] = {}
        self._edge_count = 0

    @classmethod
    def from_edges(cls, elements: Iterable[ProgramElement],
                   edges: Iterable[DependencyEdge]) -> "DependencyNetwork":
        net = cls()
        for element in elements:
            net.add_node(element)
        for edge in edges:
            net.add_edge(edge)
        return net

    def add_node(self, element: ProgramElement) -> "DependencyNetwork":
        if element.id in self._nodes:
            raise DuplicateNodeError(f"duplicate node id {element.id!r}")
        self._nodes[element.id] = element
        self._out[element.id] = {}
        self._in[element.id] = {}
        return self

    def add_edge(self, edge: DependencyEdge) -> "DependencyNetwork":
        for endpoint in (edge.source, edge.target):
            if endpoint not in self._nodes:
                raise UnknownNodeError(f"edge endpoint {endpoint!r} is not a node")
        if edge.source == edge.target:
            raise SelfDependencyError(f"self-dependency on {edge.source!r}")
        if edge.target in self._out[edge.source]:
            return self
        self._out[edge.source][edge.target] = edge.kind
        self._in[edge.target][edge.source] = edge.kind
        self._edge_count += 1
        return self

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __iter__(self) -> Iterator[str]:
        return iter(self._nodes)

    def node(self, node_id: str) -> ProgramElement:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"no node {node_id!r}") from None

    @property
    def nodes(self) -> list[ProgramElement]:
        return list(self._nodes.values())

    @property
    def node_ids(self) -> list[str]:
        return list(self._nodes)

    @property
    def edges(self) -> list[DependencyEdge]:
        return [DependencyEdge(s, t, kind)
                for s, targets in self._out.items()
                for t, kind in targets.items()]

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def has_edge(self, source: str, target: str) -> bool:
        return target in self._out.get(source, {})

    def successors(self, node_id: str) -> list[str]:
        return list(self._out[node_id])

    def predecessors(self, node_id: str) -> list[str]:
        return list(self._in[node_id])

    def out_degree(self, node_id: str) -> int:
        return len(self._out[node_id])

    def in_degree(self, node_id: str) -> int:
        return len(self._in[node_id])

    def find_by_name(self, name: str) -> ProgramElement | None:
        for element in self._nodes.values():
            if element.name == name:
                return element
        return None

    def __repr__(self) -> str:
        return f"DependencyNetwork(nodes={len(self)}, edges={self._edge_count})"
