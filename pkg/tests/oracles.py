"""Brute-force reference computations used to check the library.

Nothing here shares code with the package: distances come from
Floyd-Warshall, shortest paths are listed one by one, and the eigenvector
comes from a dense eigen-decomposition.
"""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def adjacency(net) -> tuple[list[str], np.ndarray]:
    ids = sorted(net.node_ids)
    pos = {v: i for i, v in enumerate(ids)}
    a = np.zeros((len(ids), len(ids)))
    for e in net.edges:
        a[pos[e.source], pos[e.target]] = 1.0
    return ids, a


def all_pairs_distances(a: np.ndarray) -> list[list[float]]:
    n = len(a)
    d = [[0 if i == j else (1 if a[i, j] else INF) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def closeness_oracle(net) -> dict[str, float]:
    ids, a = adjacency(net)
    n = len(ids)
    d = all_pairs_distances(a)
    out = {}
    for i, v in enumerate(ids):
        reach = [d[i][j] for j in range(n) if j != i and d[i][j] < INF]
        if not reach:
            out[v] = 0.0
        else:
            out[v] = (len(reach) / (n - 1)) * (len(reach) / sum(reach))
    return out


def shortest_paths(a: np.ndarray, d, s: int, t: int) -> list[tuple[int, ...]]:
    """Every shortest s-t path, listed explicitly by depth-first search."""
    n = len(a)
    if d[s][t] == INF:
        return []
    found = []

    def walk(path):
        last = path[-1]
        if last == t:
            found.append(tuple(path))
            return
        for w in range(n):
            if a[last, w] and d[s][w] == len(path) and d[w][t] == d[s][t] - len(path):
                walk(path + [w])

    walk([s])
    return found


def betweenness_oracle(net) -> dict[str, float]:
    ids, a = adjacency(net)
    n = len(ids)
    d = all_pairs_distances(a)
    score = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            paths = shortest_paths(a, d, s, t)
            for v in range(n):
                if v in (s, t) or not paths:
                    continue
                score[v] += sum(v in p for p in paths) / len(paths)
    return dict(zip(ids, score))


def eigen_oracle(net, offset: float = 1e-6) -> dict[str, float]:
    ids, a = adjacency(net)
    if not a.any():
        return {v: 0.0 for v in ids}
    m = a.T + offset * np.ones_like(a)
    values, vectors = np.linalg.eig(m)
    k = int(np.argmax(values.real))
    vec = np.abs(vectors[:, k].real)
    vec = vec / vec.max()
    return dict(zip(ids, vec))


def rule_oracle(ind, outd, clos, bet, eig, il, iu, ol, ou, b, c, e) -> int:
    """Layer for one score profile, written as plain nested conditionals."""
    if ind == 0 and outd == 0:
        return 1
    if ind > il:
        in_part = 1
    elif ind < iu:
        in_part = 3
    else:
        in_part = 2
    if outd > ou:
        out_part = 3
    elif outd < ol:
        out_part = 1
    else:
        out_part = 2
    if in_part == out_part:
        return in_part
    if eig >= e:
        return 1
    if outd == 0 and ind > 0:
        return 1
    if ind == 0 and outd > 0:
        return 3
    if bet > b:
        return 2
    if clos > c:
        return 3
    if ind > il:
        return 1
    if outd > ou:
        return 3
    return 2
