"""Per-node centrality scores and the score-table CSV format.

Measures: in/out/total degree (normalised by n-1), closeness over the
out-reachable set, betweenness over directed shortest paths (Brandes), and
an eigenvector score on incoming edges regularised by a small uniform offset
so that acyclic graphs do not collapse to the zero vector.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericalError, ParseError, SchemaError
from .layers import Layer, LayerAssignment
from .network import DependencyNetwork

CSV_COLUMNS = ["Id", "Label", "In-Degree", "Out-Degree", "Closeness",
               "Betweenness", "Eigenvector", "Layer"]


@dataclass(frozen=True)
class CentralityRecord:
    node: str
    label: str
    in_degree: int
    out_degree: int
    degree: int
    norm_degree: float
    closeness: float
    betweenness: float
    norm_betweenness: float
    eigenvector: float

    @property
    def features(self) -> tuple[float, float, float, float, float]:
        return (float(self.in_degree), float(self.out_degree), self.closeness,
                self.betweenness, self.eigenvector)


@dataclass
class CentralityTable:
    records: list[CentralityRecord]
    layers: dict[str, Layer] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def by_node(self) -> dict[str, CentralityRecord]:
        return {r.node: r for r in self.records}

    def record(self, node_id: str) -> CentralityRecord:
        for r in self.records:
            if r.node == node_id:
                return r
        raise KeyError(node_id)

    @property
    def node_ids(self) -> list[str]:
        return [r.node for r in self.records]

    def with_layers(self, assignment: LayerAssignment | dict) -> "CentralityTable":
        labels = assignment.labels if isinstance(assignment, LayerAssignment) else assignment
        return CentralityTable(list(self.records), {k: Layer(v) for k, v in labels.items()})


@dataclass(frozen=True)
class EigenConfig:
    damping_offset: float = 1e-6
    max_iterations: int = 1000
    tolerance: float = 1e-10
    # Matrix-squaring fallback when plain iteration has not converged.
    accelerate: bool = True
    dense_limit: int = 3000

    def __post_init__(self):
        if not (self.damping_offset > 0 and self.max_iterations > 0 and self.tolerance > 0):
            raise ValueError("EigenConfig values must be strictly positive")


def _index(network: DependencyNetwork):
    ids = network.node_ids
    pos = {node_id: i for i, node_id in enumerate(ids)}
    out = [[pos[t] for t in network.successors(node_id)] for node_id in ids]
    return ids, out


def _norm_betweenness(value: float, n: int) -> float:
    if n < 3:
        return 0.0
    return 2.0 * value / (n * n - 3 * n + 2)


def degree_centrality(network: DependencyNetwork) -> dict[str, tuple[int, int, int, float]]:
    n = len(network)
    result = {}
    for node_id in network:
        ind, outd = network.in_degree(node_id), network.out_degree(node_id)
        deg = ind + outd
        result[node_id] = (ind, outd, deg, deg / (n - 1) if n >= 2 else 0.0)
    return result


def _bfs(out: list[list[int]], source: int):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in out[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def closeness_centrality(network: DependencyNetwork, harmonic: bool = False) -> dict[str, float]:
    """Closeness over the set R(v) reachable along outgoing edges.

    Default: (|R|/(n-1)) * (|R| / sum of distances), 0 when R is empty.
    ``harmonic=True`` gives sum(1/d) / (n-1) instead.
    """
    ids, out = _index(network)
    n = len(ids)
    result = {}
    for i, node_id in enumerate(ids):
        dist = _bfs(out, i)
        del dist[i]
        if not dist or n < 2:
            result[node_id] = 0.0
        elif harmonic:
            result[node_id] = math.fsum(1.0 / d for d in dist.values()) / (n - 1)
        else:
            reach = len(dist)
            result[node_id] = (reach / (n - 1)) * (reach / sum(dist.values()))
    return result


def betweenness_centrality(network: DependencyNetwork) -> dict[str, tuple[float, float]]:
    """Brandes accumulation over directed shortest paths.

    Returns (raw, normalised) per node; normalisation is 2*raw/(n^2-3n+2).
    """
    ids, out = _index(network)
    n = len(ids)
    contributions: list[list[float]] = [[] for _ in range(n)]
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in out[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s and delta[w]:
                contributions[w].append(delta[w])
    result = {}
    for i, node_id in enumerate(ids):
        # fsum is exactly rounded, so the total does not depend on source order.
        raw = float(f"{math.fsum(contributions[i]):.12g}")
        result[node_id] = (raw, _norm_betweenness(raw, n))
    return result


def _offset_matvec(x: np.ndarray, src: np.ndarray, dst: np.ndarray, offset: float) -> np.ndarray:
    n = len(x)
    return np.bincount(dst, weights=x[src], minlength=n) + offset * x.sum()


def eigenvector_centrality(network: DependencyNetwork,
                           config: EigenConfig | None = None) -> dict[str, float]:
    """Dominant eigenvector of A^T + c*J, max-normalised.

    A is the adjacency matrix (A[u, v] = 1 for an edge u -> v), J the all-ones
    matrix and c ``config.damping_offset``: every step propagates scores along
    incoming edges and adds c times the current total to each node. The
    iteration is shifted by the current eigenvalue estimate, which removes the
    oscillation that acyclic graphs otherwise show. Edgeless graphs score 0.
    """
    config = config or EigenConfig()
    ids = network.node_ids
    n = len(ids)
    if network.edge_count == 0:
        return {node_id: 0.0 for node_id in ids}
    pos = {node_id: i for i, node_id in enumerate(ids)}
    edges = network.edges
    src = np.fromiter((pos[e.source] for e in edges), dtype=np.intp, count=len(edges))
    dst = np.fromiter((pos[e.target] for e in edges), dtype=np.intp, count=len(edges))

    x = np.ones(n)
    converged = False
    for _ in range(config.max_iterations):
        z = _offset_matvec(x, src, dst, config.damping_offset)
        y = z + z.max() * x
        y /= y.max()
        if not np.all(np.isfinite(y)):
            raise NumericalError("non-finite value during power iteration")
        change = np.abs(y - x).max()
        x = y
        if change < config.tolerance:
            converged = True
            break

    if not converged and config.accelerate and n <= config.dense_limit:
        x = _squared_power(src, dst, n, config.damping_offset, config.tolerance, x)

    x = x / x.max()
    return {node_id: float(x[i]) for i, node_id in enumerate(ids)}


def _squared_power(src, dst, n, offset, tolerance, x0, max_squarings: int = 64):
    """Power iteration on M^(2^k): repeated squaring of the dense operator."""
    m = np.full((n, n), offset)
    np.add.at(m, (dst, src), 1.0)
    m /= m.max()
    x = x0 / x0.max()
    for _ in range(max_squarings):
        m = m @ m
        m /= m.max()
        if not np.all(np.isfinite(m)):
            raise NumericalError("non-finite value while squaring")
        y = m @ x0
        y /= y.max()
        change = np.abs(y - x).max()
        x = y
        if change < tolerance:
            break
    return x


def compute_table(network: DependencyNetwork, config: EigenConfig | None = None,
                  harmonic_closeness: bool = False) -> CentralityTable:
    degrees = degree_centrality(network)
    closeness = closeness_centrality(network, harmonic=harmonic_closeness)
    between = betweenness_centrality(network)
    eigen = eigenvector_centrality(network, config)
    records = []
    for node_id in network:
        ind, outd, deg, norm = degrees[node_id]
        raw, norm_b = between[node_id]
        records.append(CentralityRecord(
            node=node_id, label=network.node(node_id).name,
            in_degree=ind, out_degree=outd, degree=deg, norm_degree=norm,
            closeness=closeness[node_id], betweenness=raw,
            norm_betweenness=norm_b, eigenvector=eigen[node_id]))
    return CentralityTable(records)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return format(value, ".6g")


def emit_csv(table: CentralityTable, assignment: LayerAssignment | None = None) -> str:
    layers = assignment.labels if assignment is not None else table.layers
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in table.records:
        layer = layers.get(r.node)
        writer.writerow([r.node, r.label, r.in_degree, r.out_degree, _fmt(r.closeness),
                         _fmt(r.betweenness), _fmt(r.eigenvector),
                         int(layer) if layer is not None else ""])
    return buf.getvalue()


def normalize_header(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_REQUIRED = ["id", "label", "indegree", "outdegree", "closeness", "betweenness", "eigenvector"]


def _read_rows(text: str, required: list[str]):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty CSV: no header row") from None
    columns = {normalize_header(h): i for i, h in enumerate(header)}
    missing = [c for c in required if c not in columns]
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}")
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        yield reader.line_num, {key: row[i].strip() for key, i in columns.items()}


def _number(cell: str, column: str, line: int, integer: bool = False):
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"column {column!r}: {cell!r} is not a number", line) from None
    if not math.isfinite(value):
        raise ParseError(f"column {column!r}: {cell!r} is not finite", line)
    if integer:
        if value != int(value) or value < 0:
            raise ParseError(f"column {column!r}: {cell!r} is not a count", line)
        return int(value)
    return value


def _layer(cell: str, line: int) -> Layer | None:
    if cell == "":
        return None
    try:
        return Layer.parse(cell)
    except ValueError:
        raise ParseError(f"bad layer value {cell!r}", line) from None


def parse_csv(text: str) -> CentralityTable:
    """Read a score table; derived degree fields are recomputed from the row count."""
    rows = list(_read_rows(text, _REQUIRED))
    n = len(rows)
    records = []
    layers = {}
    for line, row in rows:
        ind = _number(row["indegree"], "In-Degree", line, integer=True)
        outd = _number(row["outdegree"], "Out-Degree", line, integer=True)
        between = _number(row["betweenness"], "Betweenness", line)
        record = CentralityRecord(
            node=row["id"], label=row["label"] or row["id"],
            in_degree=ind, out_degree=outd, degree=ind + outd,
            norm_degree=(ind + outd) / (n - 1) if n >= 2 else 0.0,
            closeness=_number(row["closeness"], "Closeness", line),
            betweenness=between, norm_betweenness=_norm_betweenness(between, n),
            eigenvector=_number(row["eigenvector"], "Eigenvector", line))
        records.append(record)
        layer = _layer(row.get("layer", ""), line)
        if layer is not None:
            layers[record.node] = layer
    return CentralityTable(records, layers)


def parse_labels_csv(text: str) -> dict[tuple[str, str], Layer]:
    """Read (Id, Label) -> Layer from any CSV with Id, Label and Layer columns."""
    labels = {}
    for line, row in _read_rows(text, ["id", "label", "layer"]):
        layer = _layer(row["layer"], line)
        if layer is None:
            raise ParseError("empty Layer cell", line)
        labels[(row["id"], row["label"])] = layer
    return labels


def rounded(record: CentralityRecord) -> CentralityRecord:
    """The record as it reads back from CSV (6 significant digits)."""
    return replace(record, closeness=float(_fmt(record.closeness)),
                   betweenness=float(_fmt(record.betweenness)),
                   eigenvector=float(_fmt(record.eigenvector)))
