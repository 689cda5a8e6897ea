"""Supervised layer assignment from centrality features."""

from .dataset import (FEATURES, LabeledDataset, ScalerParams, apply_scaler,
                      fit_scaler)
from .model import (TrainedModel, accuracy_on, load_model, predict, save_model,
                    train, train_knn, train_svm, train_tree)

__all__ = [
    "FEATURES", "LabeledDataset", "ScalerParams", "TrainedModel", "accuracy_on",
    "apply_scaler", "fit_scaler", "load_model", "predict", "save_model", "train",
    "train_knn", "train_svm", "train_tree",
]
