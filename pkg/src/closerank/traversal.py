"""Breadth-first traversal and closeness centrality.

Closeness of a node u in a connected graph with n nodes is

    C(u) = (n - 1) / sum_v d(u, v)

with d the hop distance.  Every routine here costs one BFS, i.e. O(m);
``closeness_all`` runs one BFS per node.  Distance sums are accumulated in
integers and divided once, so results do not depend on traversal order or
thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, _gather

__all__ = [
    "ConnectivityError",
    "ClosenessProbe",
    "bfs_levels",
    "closeness",
    "closeness_probe",
    "closeness_all",
]


class ConnectivityError(GraphError):
    """A traversal failed to reach every node."""


@dataclass(frozen=True)
class ClosenessProbe:
    """Side channel of one instrumented BFS.

    Attributes
    ----------
    source : int
        The traversal root.
    closeness : float
        C(source).
    max_degree_node : int
        Id of the highest-degree node in the graph (smallest id on ties).
    farthest_nodes : ndarray
        Sorted ids of all nodes at distance ``eccentricity`` from the root.
    eccentricity : int
        Largest hop distance reached.
    """

    source: int
    closeness: float
    max_degree_node: int
    farthest_nodes: np.ndarray
    eccentricity: int


def _bfs_fill(indptr: np.ndarray, indices: np.ndarray, source: int,
              dist: np.ndarray) -> tuple[int, int]:
    """Level-synchronous BFS writing hop counts into ``dist``.

    Unreached nodes keep -1.  Returns (eccentricity, visited count).
    """
    dist[:] = -1
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    visited = 1
    while frontier.size:
        neigh = _gather(indptr, indices, frontier)
        neigh = neigh[dist[neigh] < 0]
        if neigh.size == 0:
            break
        frontier = np.unique(neigh).astype(np.int64)
        level += 1
        dist[frontier] = level
        visited += frontier.size
    return level, visited


def _require_node(graph: Graph, node: int) -> None:
    if not 0 <= node < graph.node_count:
        raise IndexError(
            f"node {node} out of range for graph with {graph.node_count} nodes"
        )


def bfs_levels(graph: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` to every node.

    Raises :class:`ConnectivityError` if any node is unreachable.
    """
    _require_node(graph, source)
    dist = np.empty(graph.node_count, dtype=np.int32)
    _, visited = _bfs_fill(graph.indptr, graph.indices, source, dist)
    if visited != graph.node_count:
        raise ConnectivityError("graph not connected")
    return dist


def closeness(graph: Graph, node: int) -> float:
    """Closeness centrality of one node; one BFS."""
    n = graph.node_count
    if n < 2:
        raise GraphError("closeness needs at least two nodes")
    dist = bfs_levels(graph, node)
    return (n - 1) / int(dist.sum(dtype=np.int64))


def closeness_probe(graph: Graph, node: int) -> ClosenessProbe:
    """Closeness of ``node`` plus what the traversal saw on the way.

    The farthest-node list and the graph-level maximum-degree node come for
    free from the same BFS and degree table; estimators build their scale
    calibration from them.
    """
    n = graph.node_count
    if n < 2:
        raise GraphError("closeness needs at least two nodes")
    _require_node(graph, node)
    dist = np.empty(n, dtype=np.int32)
    ecc, visited = _bfs_fill(graph.indptr, graph.indices, node, dist)
    if visited != n:
        raise ConnectivityError("graph not connected")
    farthest = np.flatnonzero(dist == ecc)
    return ClosenessProbe(
        source=node,
        closeness=(n - 1) / int(dist.sum(dtype=np.int64)),
        max_degree_node=graph.max_degree_node,
        farthest_nodes=farthest,
        eccentricity=ecc,
    )


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def closeness_all(graph: Graph, threads: int | None = None) -> np.ndarray:
    """Closeness of every node: n independent traversals.

    Sources are partitioned into contiguous blocks handled by a thread
    pool; each value lands in its own slot, so the output is bitwise
    identical for any ``threads``.  Defaults to the machine's CPU count.
    """
    n = graph.node_count
    if n < 2:
        raise GraphError("closeness needs at least two nodes")
    threads = _resolve_threads(threads)
    out = np.empty(n, dtype=np.float64)

    def run_block(lo: int, hi: int) -> None:
        dist = np.empty(n, dtype=np.int32)
        for source in range(lo, hi):
            _, visited = _bfs_fill(graph.indptr, graph.indices, source, dist)
            if visited != n:
                raise ConnectivityError("graph not connected")
            out[source] = (n - 1) / int(dist.sum(dtype=np.int64))

    if threads == 1 or n < 64:
        run_block(0, n)
        return out
    bounds = np.linspace(0, n, threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(run_block, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            fut.result()
    return out
