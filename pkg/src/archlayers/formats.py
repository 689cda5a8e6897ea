"""Text formats for dependency networks: a GML subset, edge lists, and DOT.

The GML subset understood here is a top-level ``graph [ ... ]`` block holding
``node [ id <int> label "<name>" ]`` and ``edge [ source <int> target <int> ]``
entries. Nodes and edges may carry an optional ``kind`` string (edges also
accept ``relationship``). Other keys are parsed and ignored.
"""

from __future__ import annotations

import html
import re
from typing import Union

from .errors import ParseError
from .layers import Layer, LayerAssignment
from .network import (DependencyEdge, DependencyNetwork, EdgeKind, ElementKind,
                      ProgramElement, node_sort_key)

GmlValue = Union[int, float, str, list]

_GML_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"]*")
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<key>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<open>\[)
  | (?P<close>\])
""", re.VERBOSE)


def _tokenize_gml(text: str):
    line = 1
    pos = 0
    while pos < len(text):
        m = _GML_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
        elif kind == "string":
            yield kind, html.unescape(value[1:-1]), line
            line += value.count("\n")
        elif kind not in ("ws", "comment"):
            yield kind, value, line
        pos = m.end()
    yield "eof", None, line


def _parse_gml_list(tokens, closing: bool) -> list[tuple[str, GmlValue, int]]:
    items = []
    while True:
        kind, value, line = next(tokens)
        if kind == "eof":
            if closing:
                raise ParseError("unterminated '[' block", line)
            return items
        if kind == "close":
            if not closing:
                raise ParseError("unbalanced ']'", line)
            return items
        if kind != "key":
            raise ParseError(f"expected a key, found {value!r}", line)
        vkind, vvalue, vline = next(tokens)
        if vkind == "open":
            items.append((value, _parse_gml_list(tokens, True), line))
        elif vkind == "number":
            number = float(vvalue) if any(c in vvalue for c in ".eE") else int(vvalue)
            items.append((value, number, line))
        elif vkind == "string":
            items.append((value, vvalue, line))
        else:
            raise ParseError(f"key {value!r} has no value", vline)


def parse_gml_tree(text: str) -> list[tuple[str, GmlValue, int]]:
    """Parse GML into nested ``(key, value, line)`` triples."""
    return _parse_gml_list(_tokenize_gml(text), closing=False)


def _first(items, key):
    for k, v, line in items:
        if k == key:
            return v, line
    return None, None


def parse_gml(text: str) -> DependencyNetwork:
    tree = parse_gml_tree(text)
    graph, line = _first(tree, "graph")
    if not isinstance(graph, list):
        raise ParseError("no top-level 'graph [ ... ]' block", line or 1)

    net = DependencyNetwork()
    for key, value, line in graph:
        if key != "node":
            continue
        if not isinstance(value, list):
            raise ParseError("'node' must be a block", line)
        node_id, _ = _first(value, "id")
        if not isinstance(node_id, int):
            raise ParseError("node needs an integer 'id'", line)
        label, _ = _first(value, "label")
        kind, _ = _first(value, "kind")
        name = str(label) if label not in (None, "") else str(node_id)
        net.add_node(ProgramElement(str(node_id), name, ElementKind.parse(kind)))

    for key, value, line in graph:
        if key != "edge":
            continue
        if not isinstance(value, list):
            raise ParseError("'edge' must be a block", line)
        source, _ = _first(value, "source")
        target, _ = _first(value, "target")
        if not isinstance(source, int) or not isinstance(target, int):
            raise ParseError("edge needs integer 'source' and 'target'", line)
        kind, _ = _first(value, "kind")
        if kind is None:
            kind, _ = _first(value, "relationship")
        net.add_edge(DependencyEdge(str(source), str(target), EdgeKind.parse(kind)))
    return net


def _gml_string(value: str) -> str:
    return '"' + value.replace("&", "&amp;").replace('"', "&quot;") + '"'


def emit_gml(network: DependencyNetwork) -> str:
    """Deterministic GML; node ids are renumbered densely from 0."""
    order = sorted(network.node_ids, key=node_sort_key)
    index = {node_id: i for i, node_id in enumerate(order)}
    lines = ["graph [", "  directed 1"]
    for node_id in order:
        element = network.node(node_id)
        attrs = f"id {index[node_id]} label {_gml_string(element.name)}"
        if element.kind is not ElementKind.UNKNOWN:
            attrs += f" kind {_gml_string(element.kind.value)}"
        lines.append(f"  node [ {attrs} ]")
    edges = sorted(network.edges, key=lambda e: (index[e.source], index[e.target]))
    for edge in edges:
        attrs = f"source {index[edge.source]} target {index[edge.target]}"
        if edge.kind is not EdgeKind.UNKNOWN:
            attrs += f" kind {_gml_string(edge.kind.value)}"
        lines.append(f"  edge [ {attrs} ]")
    lines.append("]")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> DependencyNetwork:
    """Read ``source target [kind]`` records, one per line; ``#`` comments."""
    net = DependencyNetwork()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) < 2:
            raise ParseError("expected 'source target [kind]'", lineno)
        source, target = fields[0], fields[1]
        for name in (source, target):
            if name not in net:
                net.add_node(ProgramElement(name, name))
        kind = EdgeKind.parse(fields[2]) if len(fields) > 2 else EdgeKind.UNKNOWN
        net.add_edge(DependencyEdge(source, target, kind))
    return net


def _dot_id(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(network: DependencyNetwork,
             assignment: LayerAssignment | None = None) -> str:
    """DOT digraph; with an assignment, nodes sit in one cluster per layer."""
    order = sorted(network.node_ids, key=node_sort_key)
    if assignment is not None:
        assignment.require_total(order)

    lines = ["digraph dependencies {", "  rankdir=TB;", "  node [shape=box];"]
    if assignment is None:
        for node_id in order:
            lines.append(f"  {_dot_id(node_id)} [label={_dot_id(network.node(node_id).name)}];")
    else:
        for layer in sorted(Layer, reverse=True):
            lines.append(f"  subgraph cluster_{layer.label} {{")
            lines.append(f"    label={_dot_id(layer.label)};")
            for node_id in order:
                if assignment[node_id] == layer:
                    lines.append(f"    {_dot_id(node_id)} "
                                 f"[label={_dot_id(network.node(node_id).name)}];")
            lines.append("  }")
    index = {node_id: i for i, node_id in enumerate(order)}
    for edge in sorted(network.edges, key=lambda e: (index[e.source], index[e.target])):
        lines.append(f"  {_dot_id(edge.source)} -> {_dot_id(edge.target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
