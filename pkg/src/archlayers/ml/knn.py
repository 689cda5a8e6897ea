from __future__ import annotations

import numpy as np


def knn_predict(train_x: np.ndarray, train_y: np.ndarray, k: int, queries: np.ndarray) -> np.ndarray:
    """Majority vote of the k nearest rows (Euclidean).

    Neighbours are ranked by distance, then label, then row index. A vote tie
    goes to the label with the smaller summed distance, then the smaller label.
    """
    out = np.empty(len(queries), dtype=int)
    index = np.arange(len(train_y))
    for q, query in enumerate(queries):
        dist = np.sqrt(((train_x - query) ** 2).sum(axis=1))
        nearest = np.lexsort((index, train_y, dist))[:k]
        best = None
        for label in sorted(set(train_y[nearest].tolist())):
            chosen = nearest[train_y[nearest] == label]
            key = (-len(chosen), float(dist[chosen].sum()), label)
            if best is None or key < best:
                best = key
        out[q] = best[2]
    return out
