from __future__ import annotations

import numpy as np

CLASSES = np.array([1, 2, 3])


def fit_ovr_hinge(x: np.ndarray, y: np.ndarray, epochs: int, learning_rate: float,
                  regularization: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """One-vs-rest linear classifiers, SGD on L2-regularised hinge loss.

    All three classifiers see the same seeded row permutation each epoch.
    """
    rng = np.random.default_rng(seed)
    weights = np.zeros((len(CLASSES), x.shape[1]))
    bias = np.zeros(len(CLASSES))
    for _ in range(epochs):
        for i in rng.permutation(len(y)):
            target = np.where(CLASSES == y[i], 1.0, -1.0)
            margin = target * (weights @ x[i] + bias)
            active = margin < 1.0
            weights *= 1.0 - learning_rate * regularization
            weights[active] += learning_rate * target[active, None] * x[i]
            bias[active] += learning_rate * target[active]
    return weights, bias


def svm_decision(weights: np.ndarray, bias: np.ndarray, x: np.ndarray) -> np.ndarray:
    return x @ weights.T + bias


def svm_predict(weights: np.ndarray, bias: np.ndarray, x: np.ndarray) -> np.ndarray:
    # argmax returns the first maximum, i.e. the smaller label on ties.
    return CLASSES[np.argmax(svm_decision(weights, bias, x), axis=1)]
