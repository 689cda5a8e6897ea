from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..centrality import CentralityTable
from ..errors import TrainError
from ..layers import Layer

FEATURES = ("in_degree", "out_degree", "closeness", "betweenness", "eigenvector")


@dataclass(frozen=True)
class LabeledDataset:
    """Centrality feature rows with their layer labels (1, 2 or 3)."""

    features: np.ndarray   # shape (m, 5), FEATURES order
    labels: np.ndarray     # shape (m,), ints in {1, 2, 3}
    names: tuple[str, ...] = ()

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float).reshape(-1, len(FEATURES))
        labels = np.asarray(self.labels, dtype=int).reshape(-1)
        if len(features) != len(labels):
            raise TrainError("feature rows and labels differ in length")
        if not np.all(np.isfinite(features)):
            raise TrainError("features must be finite")
        if not np.all(np.isin(labels, [1, 2, 3])):
            raise TrainError("labels must be 1, 2 or 3")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def classes(self) -> list[int]:
        return sorted(set(self.labels.tolist()))

    def subset(self, rows) -> "LabeledDataset":
        rows = np.asarray(rows)
        names = tuple(self.names[i] for i in rows) if self.names else ()
        return LabeledDataset(self.features[rows], self.labels[rows], names)

    @classmethod
    def from_table(cls, table: CentralityTable) -> "LabeledDataset":
        missing = [r.node for r in table.records if r.node not in table.layers]
        if missing:
            raise TrainError(f"{len(missing)} row(s) have no Layer label")
        return cls(
            np.array([r.features for r in table.records], dtype=float),
            np.array([int(table.layers[r.node]) for r in table.records], dtype=int),
            tuple(r.label for r in table.records))


def table_features(table: CentralityTable) -> np.ndarray:
    return np.array([r.features for r in table.records], dtype=float).reshape(-1, len(FEATURES))


@dataclass(frozen=True)
class ScalerParams:
    minimum: np.ndarray
    maximum: np.ndarray


def fit_scaler(features) -> ScalerParams:
    features = np.asarray(features, dtype=float)
    if features.size == 0:
        raise TrainError("cannot fit a scaler on an empty dataset")
    return ScalerParams(features.min(axis=0), features.max(axis=0))


def apply_scaler(params: ScalerParams, features) -> np.ndarray:
    """Min-max scaling, unclipped; constant training columns map to 0."""
    features = np.asarray(features, dtype=float)
    span = params.maximum - params.minimum
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (features - params.minimum) / safe, 0.0)


def majority(labels) -> int:
    """Most frequent label; ties go to the smaller label."""
    counts = np.bincount(np.asarray(labels, dtype=int), minlength=4)
    return int(np.argmax(counts))


LAYER_VALUES = tuple(int(layer) for layer in Layer)
