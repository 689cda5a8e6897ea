"""CART classification tree with Gini impurity."""

from __future__ import annotations

import numpy as np

from .dataset import majority

_MIN_GAIN = 1e-12


def gini(labels: np.ndarray) -> float:
    if len(labels) == 0:
        return 0.0
    p = np.bincount(labels, minlength=4)[1:] / len(labels)
    return float(1.0 - np.sum(p * p))


def best_split(x: np.ndarray, y: np.ndarray, min_leaf: int):
    """Best (feature, threshold, gain) over midpoints of distinct values.

    Rows with value <= threshold go left. Returns None when no split keeps
    ``min_leaf`` rows on both sides with a positive impurity decrease.
    Earlier features and smaller thresholds win ties.
    """
    n = len(y)
    parent = gini(y)
    best = None
    onehot = np.zeros((n, 4))
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        values = x[order, f]
        onehot[:] = 0
        onehot[np.arange(n), y[order]] = 1
        left_counts = np.cumsum(onehot, axis=0)
        total = left_counts[-1]
        for i in range(n - 1):
            if values[i] == values[i + 1]:
                continue
            n_left = i + 1
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            lc = left_counts[i]
            rc = total - lc
            g_left = 1.0 - np.sum((lc / n_left) ** 2)
            g_right = 1.0 - np.sum((rc / n_right) ** 2)
            gain = parent - (n_left * g_left + n_right * g_right) / n
            if gain > _MIN_GAIN and (best is None or gain > best[2] + _MIN_GAIN):
                best = (f, float((values[i] + values[i + 1]) / 2.0), float(gain))
    return best


def grow_tree(x: np.ndarray, y: np.ndarray, max_depth: int, min_leaf: int) -> list[dict]:
    """Flat node list; node 0 is the root, leaves have ``feature`` None."""
    nodes: list[dict] = []

    def build(rows: np.ndarray, depth: int) -> int:
        node_id = len(nodes)
        node = {"feature": None, "threshold": None, "left": None, "right": None,
                "label": majority(y[rows]), "depth": depth}
        nodes.append(node)
        if depth >= max_depth or len(set(y[rows].tolist())) == 1:
            return node_id
        split = best_split(x[rows], y[rows], min_leaf)
        if split is None:
            return node_id
        feature, threshold, _ = split
        mask = x[rows, feature] <= threshold
        node["feature"], node["threshold"] = feature, threshold
        node["left"] = build(rows[mask], depth + 1)
        node["right"] = build(rows[~mask], depth + 1)
        return node_id

    build(np.arange(len(y)), 0)
    return nodes


def tree_predict(nodes: list[dict], queries: np.ndarray) -> np.ndarray:
    out = np.empty(len(queries), dtype=int)
    for q, row in enumerate(queries):
        node = nodes[0]
        while node["feature"] is not None:
            branch = "left" if row[node["feature"]] <= node["threshold"] else "right"
            node = nodes[node[branch]]
        out[q] = node["label"]
    return out


def tree_depth(nodes: list[dict]) -> int:
    return max(node["depth"] for node in nodes)
