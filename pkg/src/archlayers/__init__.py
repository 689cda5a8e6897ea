"""Recover layered architectures from source dependency graphs.

Centrality scores computed on the dependency network drive either a
threshold rule pipeline or a trained classifier that places every program
element in the upper, middle or lower layer.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .centrality import (CentralityRecord, CentralityTable, EigenConfig,
                         betweenness_centrality, closeness_centrality,
                         compute_table, degree_centrality, emit_csv,
                         eigenvector_centrality, parse_csv)
from .errors import ArchLayersError
from .evaluation import (ConfusionMatrix, MetricsReport, SyntheticSpec,
                         confusion, format_report, generate_synthetic,
                         matched_config, metrics, sweep_config,
                         violation_report)
from .extractor import ExtractionConfig, extract
from .formats import emit_dot, emit_gml, parse_edge_list, parse_gml
from .layers import Layer, LayerAssignment
from .network import (DependencyEdge, DependencyNetwork, EdgeKind,
                      ElementKind, ProgramElement)
from .rules import LayerConfig, assign_rules, primary_label, refine_label

__all__ = [
    "ArchLayersError", "CentralityRecord", "CentralityTable", "ConfusionMatrix",
    "DependencyEdge", "DependencyNetwork", "EdgeKind", "EigenConfig", "ElementKind",
    "ExtractionConfig", "Layer", "LayerAssignment", "LayerConfig", "MetricsReport",
    "ProgramElement", "SyntheticSpec", "assign_rules", "betweenness_centrality",
    "closeness_centrality", "compute_table", "confusion", "degree_centrality",
    "eigenvector_centrality", "emit_csv", "emit_dot", "emit_gml", "extract",
    "format_report", "generate_synthetic", "matched_config", "metrics", "parse_csv",
    "parse_edge_list", "parse_gml", "primary_label", "refine_label", "sweep_config",
    "violation_report",
]
