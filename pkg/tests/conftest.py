"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from closerank import BAConfig, from_edges, generate_ba


@pytest.fixture
def triangle():
    return from_edges([(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def path3():
    return from_edges([(0, 1), (1, 2)])


@pytest.fixture
def star5():
    # center 0, four leaves
    return from_edges([(0, i) for i in range(1, 5)])


@pytest.fixture
def k4():
    return from_edges([(u, v) for u in range(4) for v in range(u + 1, 4)])


def floyd_warshall_distances(graph) -> np.ndarray:
    """All-pairs hop distances by min-plus relaxation; independent of BFS."""
    n = graph.node_count
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u in range(n):
        for v in graph.neighbors(u):
            dist[u, int(v)] = 1.0
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    return dist


def rank_oracle(values) -> np.ndarray:
    """Competition ranks by explicit descending sweep."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(-values, kind="stable")
    ranks = np.empty(values.size, dtype=np.int64)
    current = 1
    for pos, idx in enumerate(order):
        if pos > 0 and values[idx] < values[order[pos - 1]]:
            current = pos + 1
        ranks[idx] = current
    return ranks


def random_connected_graph(rng: np.random.Generator, n: int, extra_edges: int):
    """Random graph, connected by construction.

    A random permutation chain guarantees connectivity; ``extra_edges``
    uniform pairs are layered on top (self-loops and duplicates collapse).
    """
    chain = rng.permutation(n)
    edges = list(zip(chain[:-1].tolist(), chain[1:].tolist()))
    if extra_edges:
        pairs = rng.integers(0, n, size=(extra_edges, 2))
        edges.extend((int(a), int(b)) for a, b in pairs if a != b)
    return from_edges(edges, n=n)


def random_test_graph(rng: np.random.Generator, max_n: int = 200):
    """Mixed pool of connected test graphs: random chains+noise or scale-free."""
    if rng.random() < 0.6:
        n = int(rng.integers(2, max_n + 1))
        extra = int(rng.integers(0, 3 * n))
        return random_connected_graph(rng, n, extra)
    m_attach = int(rng.integers(1, 6))
    n = int(rng.integers(m_attach + 2, max_n + 1))
    return generate_ba(BAConfig(n=n, m_attach=m_attach, seed=int(rng.integers(2**31))))
