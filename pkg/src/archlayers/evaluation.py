"""Scoring layer assignments against a reference labelling.

Confusion matrices are indexed ``counts[predicted][actual]``: rows are the
predicted layer, columns the actual one. Precision of a class therefore
divides by its row sum and recall by its column sum.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
from dataclasses import dataclass, fields
from typing import Mapping, Sequence

import numpy as np

from .centrality import CentralityTable
from .errors import ConfigError, DomainMismatchError, EmptyMatrixError, SpecError
from .layers import Layer, LayerAssignment
from .network import (DependencyEdge, DependencyNetwork, EdgeKind, ElementKind,
                      ProgramElement)
from .rules import LayerConfig, assign_rules

log = logging.getLogger(__name__)

LAYERS = (Layer.LOWER, Layer.MIDDLE, Layer.UPPER)


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # 3x3 ints, [predicted - 1][actual - 1]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ConfusionMatrix":
        counts = np.asarray(rows, dtype=int)
        if counts.shape != (3, 3) or np.any(counts < 0):
            raise ValueError("a confusion matrix is 3x3 with non-negative counts")
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, index: tuple[int, int]) -> int:
        predicted, actual = index
        return int(self.counts[int(predicted) - 1, int(actual) - 1])


def confusion(predicted: LayerAssignment | Mapping, actual: LayerAssignment | Mapping) -> ConfusionMatrix:
    pred = predicted.labels if isinstance(predicted, LayerAssignment) else predicted
    act = actual.labels if isinstance(actual, LayerAssignment) else actual
    if set(pred) != set(act):
        only_pred = len(set(pred) - set(act))
        only_act = len(set(act) - set(pred))
        raise DomainMismatchError(
            f"node sets differ: {only_pred} only predicted, {only_act} only actual")
    counts = np.zeros((3, 3), dtype=int)
    for node, layer in pred.items():
        counts[int(layer) - 1, int(act[node]) - 1] += 1
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: dict[Layer, float]
    recall: dict[Layer, float]
    f1: dict[Layer, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float


def _ratio(num: float, den: float) -> float:
    return float(num / den) if den else 0.0


def metrics(matrix: ConfusionMatrix) -> MetricsReport:
    counts = matrix.counts
    if matrix.total == 0:
        raise EmptyMatrixError("confusion matrix has no observations")
    precision, recall, f1 = {}, {}, {}
    for i, layer in enumerate(LAYERS):
        hit = counts[i, i]
        precision[layer] = _ratio(hit, counts[i, :].sum())
        recall[layer] = _ratio(hit, counts[:, i].sum())
        p, r = precision[layer], recall[layer]
        f1[layer] = _ratio(2 * p * r, p + r)
    return MetricsReport(
        accuracy=_ratio(np.trace(counts), matrix.total),
        precision=precision, recall=recall, f1=f1,
        macro_precision=float(np.mean(list(precision.values()))),
        macro_recall=float(np.mean(list(recall.values()))),
        macro_f1=float(np.mean(list(f1.values()))))


def format_report(matrix: ConfusionMatrix, report: MetricsReport | None = None) -> str:
    """Text report: matrix block, accuracy line, then R / P / F1 rows."""
    report = report or metrics(matrix)
    names = [layer.label for layer in LAYERS]
    lines = ["Confusion matrix (rows = predicted, columns = actual)",
             f"{'Layer':<8}" + "".join(f"{n:>8}" for n in names)]
    for i, name in enumerate(names):
        lines.append(f"{name:<8}" + "".join(f"{int(c):>8}" for c in matrix.counts[i]))
    lines.append(f"Accuracy = {report.accuracy:.2f}")
    lines.append("")
    lines.append(f"{'':<8}{'R':>8}{'P':>8}{'F1':>8}")
    for layer in LAYERS:
        lines.append(f"{layer.label:<8}{report.recall[layer]:>8.2f}"
                     f"{report.precision[layer]:>8.2f}{report.f1[layer]:>8.2f}")
    lines.append(f"{'macro':<8}{report.macro_recall:>8.2f}"
                 f"{report.macro_precision:>8.2f}{report.macro_f1:>8.2f}")
    return "\n".join(lines) + "\n"


def report_csv(matrix: ConfusionMatrix, report: MetricsReport | None = None) -> str:
    report = report or metrics(matrix)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["layer", "lower", "middle", "upper", "recall", "precision", "f1"])
    for i, layer in enumerate(LAYERS):
        writer.writerow([layer.label, *map(int, matrix.counts[i]),
                         f"{report.recall[layer]:.6f}", f"{report.precision[layer]:.6f}",
                         f"{report.f1[layer]:.6f}"])
    writer.writerow(["accuracy", "", "", "", "", "", f"{report.accuracy:.6f}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Synthetic layered systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSpec:
    """Planted three-layer system.

    ``nodes_per_layer`` is (lower, middle, upper). Each node of layer k links
    to each node of layer k-1 with ``down_probability`` and to each node of
    every higher layer with ``violation_probability``. Crosscutting nodes
    live in the lower layer and are used by every other node.
    """

    nodes_per_layer: tuple[int, int, int] = (5, 5, 5)
    down_probability: float = 1.0
    violation_probability: float = 0.0
    crosscut: int = 0
    seed: int = 0

    def validate(self) -> "SyntheticSpec":
        if len(self.nodes_per_layer) != 3 or any(c < 0 for c in self.nodes_per_layer):
            raise SpecError("nodes_per_layer needs three non-negative counts")
        if self.crosscut < 0:
            raise SpecError("crosscut must be non-negative")
        for name in ("down_probability", "violation_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise SpecError(f"{name} must lie in [0, 1]")
        if sum(self.nodes_per_layer) + self.crosscut == 0:
            raise SpecError("the system needs at least one node")
        return self


def generate_synthetic(spec: SyntheticSpec) -> tuple[DependencyNetwork, LayerAssignment]:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    members: dict[Layer, list[str]] = {layer: [] for layer in LAYERS}
    net = DependencyNetwork()
    labels: dict[str, Layer] = {}
    for layer, count in zip(LAYERS, spec.nodes_per_layer):
        for i in range(count):
            name = f"{layer.label}{i}"
            net.add_node(ProgramElement(name, name, ElementKind.CLASS))
            members[layer].append(name)
            labels[name] = layer
    crosscut = []
    for i in range(spec.crosscut):
        name = f"crosscut{i}"
        net.add_node(ProgramElement(name, name, ElementKind.CLASS))
        crosscut.append(name)
        labels[name] = Layer.LOWER

    for layer in LAYERS:
        for source in members[layer]:
            if layer > Layer.LOWER:
                for target in members[Layer(layer - 1)]:
                    if rng.random() < spec.down_probability:
                        net.add_edge(DependencyEdge(source, target, EdgeKind.IMPORTS))
            for higher in LAYERS:
                if higher <= layer:
                    continue
                for target in members[higher]:
                    if rng.random() < spec.violation_probability:
                        net.add_edge(DependencyEdge(source, target, EdgeKind.IMPORTS))
            for target in crosscut:
                net.add_edge(DependencyEdge(source, target, EdgeKind.IMPORTS))
    truth = LayerAssignment(labels, provenance="rule", source={"generator": "synthetic"})
    return net, truth


def matched_config(spec: SyntheticSpec) -> LayerConfig:
    """Thresholds placed midway between the expected degree of adjacent layers.

    Expected in/out-degrees follow from the layer sizes and edge
    probabilities. Where two layers share an expected level the cut keeps both
    in the middle band and conflict refinement decides. The betweenness and
    closeness cuts sit at their maxima, so only degree structure and the
    eigenvector rule take part.
    """
    n_lower, n_middle, n_upper = spec.nodes_per_layer
    p, q, cc = spec.down_probability, spec.violation_probability, spec.crosscut
    upper_in = q * (n_lower + n_middle)
    middle_in = p * n_upper + q * n_lower
    lower_in = p * n_middle
    upper_out = p * n_middle + cc
    middle_out = p * n_lower + cc + q * n_upper
    lower_out = q * (n_middle + n_upper) + cc

    delta_iu = max((upper_in + middle_in) / 2, 0.5)
    delta_il = (middle_in + lower_in) / 2 if lower_in > middle_in else middle_in
    delta_ol = (lower_out + middle_out) / 2
    delta_ou = (middle_out + upper_out) / 2 if upper_out > middle_out else middle_out
    n = sum(spec.nodes_per_layer) + cc
    return LayerConfig(delta_il=max(delta_il, delta_iu), delta_iu=delta_iu,
                       delta_ol=delta_ol, delta_ou=max(delta_ou, delta_ol),
                       delta_b=float(max((n - 1) * (n - 2), 0)), delta_c=1.0,
                       delta_e=0.6).validate()


# ---------------------------------------------------------------------------
# Threshold sweep
# ---------------------------------------------------------------------------

CONFIG_KEYS = tuple(f.name for f in fields(LayerConfig))


def sweep_config(network: DependencyNetwork | None, table: CentralityTable,
                 actual: LayerAssignment, grid: Mapping[str, Sequence[float]],
                 base: LayerConfig | None = None) -> list[tuple[LayerConfig, MetricsReport]]:
    """Evaluate every grid cell; best accuracy first, grid order on ties.

    Parameters absent from ``grid`` keep their ``base`` value. Cells that
    violate the threshold invariants are skipped and logged.
    """
    base = base or LayerConfig()
    unknown = set(grid) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown grid parameter(s): {', '.join(sorted(unknown))}")
    axes = []
    for key in CONFIG_KEYS:
        values = list(grid.get(key, [getattr(base, key)]))
        if not values:
            raise ConfigError(f"grid for {key} is empty")
        axes.append(values)
    results = []
    for cell in itertools.product(*axes):
        try:
            config = LayerConfig(**dict(zip(CONFIG_KEYS, map(float, cell)))).validate()
        except ConfigError as exc:
            log.info("skipping grid cell %s: %s", cell, exc)
            continue
        predicted = assign_rules(network, table, config)
        results.append((config, metrics(confusion(predicted, actual))))
    results.sort(key=lambda item: -item[1].accuracy)
    return results


# ---------------------------------------------------------------------------
# Layer violations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ViolationReport:
    count: int
    edges: list[DependencyEdge]


def violation_report(network: DependencyNetwork, assignment: LayerAssignment,
                     strict: bool = False) -> ViolationReport:
    """Edges that depend upward (lower -> higher layer).

    With ``strict`` a downward edge that skips the middle layer also counts.
    """
    assignment.require_total(network)
    found = []
    for edge in sorted(network.edges, key=lambda e: (e.source, e.target)):
        src, dst = assignment[edge.source], assignment[edge.target]
        if src < dst or (strict and src - dst > 1):
            found.append(edge)
    return ViolationReport(len(found), found)
