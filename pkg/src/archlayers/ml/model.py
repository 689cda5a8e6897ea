"""Training entry points, prediction, and the plain-text model format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..centrality import CentralityTable
from ..errors import ModelFormatError, TrainError
from ..layers import Layer, LayerAssignment
from .dataset import (FEATURES, LabeledDataset, ScalerParams, apply_scaler,
                      fit_scaler, table_features)
from .knn import knn_predict
from .svm import fit_ovr_hinge, svm_predict
from .tree import grow_tree, tree_depth, tree_predict

MODEL_FORMAT = "archlayers-model"
MODEL_VERSION = 1
KINDS = ("knn", "decision_tree", "linear_svm")

DEFAULT_HYPERPARAMETERS = {
    "knn": {"k": 5},
    "decision_tree": {"max_depth": 5, "min_leaf": 1},
    "linear_svm": {"epochs": 200, "learning_rate": 0.01, "regularization": 0.01, "seed": 0},
}


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    scaler: ScalerParams | None
    params: dict[str, Any]
    hyperparameters: dict[str, Any] = field(default_factory=dict)

    def predict_features(self, features) -> np.ndarray:
        x = np.asarray(features, dtype=float).reshape(-1, len(FEATURES))
        if self.scaler is not None:
            x = apply_scaler(self.scaler, x)
        if self.kind == "knn":
            return knn_predict(self.params["x"], self.params["y"], self.params["k"], x)
        if self.kind == "decision_tree":
            return tree_predict(self.params["nodes"], x)
        if self.kind == "linear_svm":
            return svm_predict(self.params["weights"], self.params["bias"], x)
        raise ModelFormatError(f"unknown model kind {self.kind!r}")


def train_knn(dataset: LabeledDataset, k: int = 5) -> TrainedModel:
    if len(dataset) == 0:
        raise TrainError("empty dataset")
    if not 1 <= k <= len(dataset):
        raise TrainError(f"k={k} must lie in [1, {len(dataset)}]")
    scaler = fit_scaler(dataset.features)
    params = {"k": int(k), "x": apply_scaler(scaler, dataset.features), "y": dataset.labels.copy()}
    return TrainedModel("knn", scaler, params, {"k": int(k)})


def train_tree(dataset: LabeledDataset, max_depth: int = 5, min_leaf: int = 1) -> TrainedModel:
    if len(dataset) == 0:
        raise TrainError("empty dataset")
    if max_depth < 1 or min_leaf < 1:
        raise TrainError("max_depth and min_leaf must be >= 1")
    nodes = grow_tree(dataset.features, dataset.labels, int(max_depth), int(min_leaf))
    return TrainedModel("decision_tree", None, {"nodes": nodes},
                        {"max_depth": int(max_depth), "min_leaf": int(min_leaf)})


def train_svm(dataset: LabeledDataset, epochs: int = 200, learning_rate: float = 0.01,
              regularization: float = 0.01, seed: int = 0) -> TrainedModel:
    if len(dataset.classes) < 2:
        raise TrainError("a linear SVM needs at least two classes")
    if epochs < 1 or learning_rate <= 0 or regularization < 0:
        raise TrainError("epochs >= 1, learning_rate > 0 and regularization >= 0 required")
    scaler = fit_scaler(dataset.features)
    weights, bias = fit_ovr_hinge(apply_scaler(scaler, dataset.features), dataset.labels,
                                  int(epochs), float(learning_rate), float(regularization), int(seed))
    hyper = {"epochs": int(epochs), "learning_rate": float(learning_rate),
             "regularization": float(regularization), "seed": int(seed)}
    return TrainedModel("linear_svm", scaler, {"weights": weights, "bias": bias}, hyper)


def train(dataset: LabeledDataset, algorithm: str, **hyperparameters) -> TrainedModel:
    trainers = {"knn": train_knn, "decision_tree": train_tree, "linear_svm": train_svm}
    aliases = {"tree": "decision_tree", "dt": "decision_tree", "svm": "linear_svm"}
    algorithm = aliases.get(algorithm, algorithm)
    if algorithm not in trainers:
        raise TrainError(f"unknown algorithm {algorithm!r}")
    allowed = DEFAULT_HYPERPARAMETERS[algorithm]
    options = {key: value for key, value in hyperparameters.items()
               if key in allowed and value is not None}
    return trainers[algorithm](dataset, **options)


def predict(model: TrainedModel, table: CentralityTable) -> LayerAssignment:
    predictions = model.predict_features(table_features(table)) if len(table) else []
    labels = {r.node: Layer(int(p)) for r, p in zip(table.records, predictions)}
    return LayerAssignment(labels, provenance="model",
                           source={"kind": model.kind, **model.hyperparameters})


def accuracy_on(model: TrainedModel, dataset: LabeledDataset) -> float:
    return float(np.mean(model.predict_features(dataset.features) == dataset.labels))


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def _params_to_json(kind: str, params: dict) -> dict:
    if kind == "knn":
        return {"k": params["k"], "x": params["x"].tolist(), "y": params["y"].tolist()}
    if kind == "decision_tree":
        return {"nodes": params["nodes"]}
    return {"weights": params["weights"].tolist(), "bias": params["bias"].tolist()}


def _params_from_json(kind: str, data: dict) -> dict:
    if kind == "knn":
        x = np.asarray(data["x"], dtype=float).reshape(-1, len(FEATURES))
        y = np.asarray(data["y"], dtype=int)
        if len(x) != len(y) or not 1 <= int(data["k"]) <= len(y):
            raise ModelFormatError("inconsistent knn parameters")
        return {"k": int(data["k"]), "x": x, "y": y}
    if kind == "decision_tree":
        nodes = data["nodes"]
        for node in nodes:
            if node["feature"] is not None and (node["left"] is None or node["right"] is None):
                raise ModelFormatError("tree node without two children")
        return {"nodes": nodes}
    weights = np.asarray(data["weights"], dtype=float)
    bias = np.asarray(data["bias"], dtype=float)
    if weights.shape != (3, len(FEATURES)) or bias.shape != (3,):
        raise ModelFormatError("linear_svm needs three weight vectors")
    return {"weights": weights, "bias": bias}


def save_model(model: TrainedModel) -> str:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": model.kind,
        "features": list(FEATURES),
        "hyperparameters": model.hyperparameters,
        "scaler": None if model.scaler is None else {
            "min": model.scaler.minimum.tolist(), "max": model.scaler.maximum.tolist()},
        "params": _params_to_json(model.kind, model.params),
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def load_model(text: str) -> TrainedModel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"unreadable model file: {exc}") from None
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ModelFormatError("not an archlayers model file")
    if payload.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {payload.get('version')!r}")
    kind = payload.get("kind")
    if kind not in KINDS:
        raise ModelFormatError(f"unknown model kind {kind!r}")
    try:
        scaler = payload["scaler"]
        if scaler is not None:
            scaler = ScalerParams(np.asarray(scaler["min"], dtype=float),
                                  np.asarray(scaler["max"], dtype=float))
        params = _params_from_json(kind, payload["params"])
        hyper = dict(payload.get("hyperparameters", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from None
    return TrainedModel(kind, scaler, params, hyper)


def describe(model: TrainedModel) -> str:
    if model.kind == "decision_tree":
        return f"decision_tree(depth={tree_depth(model.params['nodes'])}, nodes={len(model.params['nodes'])})"
    return f"{model.kind}({', '.join(f'{k}={v}' for k, v in model.hyperparameters.items())})"
