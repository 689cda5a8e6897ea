"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from archlayers.network import DependencyEdge, DependencyNetwork, ProgramElement


def network(nodes, edges) -> DependencyNetwork:
    net = DependencyNetwork()
    for name in nodes:
        net.add_node(ProgramElement(name, name))
    for source, target in edges:
        net.add_edge(DependencyEdge(source, target))
    return net


def random_digraph(rng: np.random.Generator, n: int, p: float) -> DependencyNetwork:
    nodes = [f"n{i}" for i in range(n)]
    edges = [(nodes[i], nodes[j]) for i in range(n) for j in range(n)
             if i != j and rng.random() < p]
    return network(nodes, edges)


def random_dag(rng: np.random.Generator, n: int, p: float) -> DependencyNetwork:
    """Edges only go from a lower to a higher position in a shuffled order."""
    order = [f"n{i}" for i in rng.permutation(n)]
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return network(sorted(order), edges)


def shape(net: DependencyNetwork):
    """Name-level view of a network, for isomorphism checks."""
    nodes = sorted((e.name, e.kind) for e in net.nodes)
    edges = sorted((net.node(e.source).name, net.node(e.target).name, e.kind)
                   for e in net.edges)
    return nodes, edges
