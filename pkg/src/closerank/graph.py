"""Undirected graph container and edge-list I/O.

Graphs are stored in compressed sparse adjacency form: nodes are dense
integers ``0..n-1`` and every node's neighbor list sits in one contiguous
slice of ``indices``, delimited by ``indptr``.  Source-file node labels are
preserved so reports can refer to the original ids.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "EdgeListParseError",
    "parse_edge_list",
    "load_edge_list",
    "from_edges",
    "write_edge_list",
    "save_edge_list",
    "largest_connected_component",
    "degree",
]


class GraphError(Exception):
    """Base class for graph construction and validation failures."""


class EdgeListParseError(GraphError):
    """Malformed edge-list input; ``line_number`` points at the bad line."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected, unweighted graph.

    Parameters
    ----------
    indptr : ndarray of int64, shape (n + 1,)
        Offsets into ``indices``; node ``u``'s neighbors are
        ``indices[indptr[u]:indptr[u + 1]]``, sorted ascending.
    indices : ndarray of int32, shape (2 m,)
        Concatenated neighbor lists.  Each undirected edge appears twice.
    original_ids : tuple of str, optional
        Maps internal ids back to the labels found in the source file.
        ``None`` for generated graphs; labels then default to ``str(u)``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    original_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.indptr.ndim != 1 or self.indptr.size < 1 or self.indptr[0] != 0:
            raise GraphError("indptr must be 1-d and start at offset 0")
        if self.indptr[-1] != self.indices.size:
            raise GraphError("indptr does not span indices")
        if self.original_ids is not None and len(self.original_ids) != self.node_count:
            raise GraphError("original_ids length does not match node count")
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.indptr.size - 1

    @property
    def edge_count(self) -> int:
        return self.indices.size // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @cached_property
    def max_degree_node(self) -> int:
        # ties resolve to the smallest id (np.argmax takes the first maximum)
        return int(np.argmax(self.degrees))

    @cached_property
    def _label_index(self) -> dict[str, int]:
        if self.original_ids is None:
            return {}
        return {lab: i for i, lab in enumerate(self.original_ids)}

    def neighbors(self, node: int) -> np.ndarray:
        """Sorted neighbor ids of ``node`` (read-only view)."""
        self._check_node(node)
        return self.indices[self.indptr[node]:self.indptr[node + 1]]

    def label(self, node: int) -> str:
        """Source-file label for an internal id."""
        self._check_node(node)
        if self.original_ids is None:
            return str(node)
        return self.original_ids[node]

    def node_id(self, label: str) -> int:
        """Internal id for a source-file label.

        Falls back to interpreting ``label`` as a bare internal id when the
        graph carries no label table.  Raises ``KeyError`` if absent.
        """
        if self.original_ids is None:
            try:
                node = int(label)
            except ValueError:
                raise KeyError(label) from None
            if not 0 <= node < self.node_count:
                raise KeyError(label)
            return node
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(label) from None

    def _check_node(self, node: int) -> None:
        if not 0 <= node < self.node_count:
            raise IndexError(
                f"node {node} out of range for graph with {self.node_count} nodes"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.node_count != other.node_count:
            return False
        if not (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)):
            return False
        if self.original_ids == other.original_ids:
            return True
        # a missing table means labels "0".."n-1"; compare what label() reports
        mine = self.original_ids or tuple(map(str, range(self.node_count)))
        theirs = other.original_ids or tuple(map(str, range(self.node_count)))
        return mine == theirs

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"


def _gather(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of ``frontier`` (multi-range CSR gather)."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return indices[:0]
    shift = np.cumsum(counts) - counts
    pos = np.repeat(starts - shift, counts) + np.arange(total, dtype=np.int64)
    return indices[pos]


def _build(n: int, pairs: np.ndarray, original_ids: tuple[str, ...] | None) -> Graph:
    """Assemble a Graph from deduplicated undirected pairs with u < v."""
    if pairs.size:
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order = np.lexsort((dst, src))
        indices = dst[order].astype(np.int32)
        counts = np.bincount(src, minlength=n)
    else:
        indices = np.empty(0, dtype=np.int32)
        counts = np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Graph(indptr=indptr, indices=indices, original_ids=original_ids)


def _canonical_pairs(us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Drop self-loops, orient u < v, deduplicate."""
    keep = us != vs
    lo = np.minimum(us[keep], vs[keep])
    hi = np.maximum(us[keep], vs[keep])
    if lo.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.stack([lo, hi], axis=1)
    return np.unique(pairs, axis=0)


def parse_edge_list(source: bytes | BinaryIO) -> Graph:
    """Parse a whitespace-delimited edge list into a :class:`Graph`.

    Accepts raw bytes or a binary stream; gzip input is detected by magic
    bytes and decompressed transparently.  Lines that are blank or start
    with ``#`` or ``%`` are skipped.  Every remaining line must hold
    exactly two node labels.  Labels are arbitrary strings, assigned dense
    internal ids in order of first appearance.  Self-loops are dropped
    (the node is kept); duplicate and reciprocal lines collapse to a
    single undirected edge.

    Raises
    ------
    EdgeListParseError
        On a malformed line (with its line number) or empty input.
    """
    data = source if isinstance(source, bytes) else source.read()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EdgeListParseError(f"input is not utf-8 text: {exc}") from None

    labels: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    saw_edge_line = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"expected two node labels, found {len(tokens)}", lineno
            )
        saw_edge_line = True
        a = labels.setdefault(tokens[0], len(labels))
        b = labels.setdefault(tokens[1], len(labels))
        us.append(a)
        vs.append(b)
    if not saw_edge_line:
        raise EdgeListParseError("empty edge list: no data lines found")

    pairs = _canonical_pairs(
        np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)
    )
    return _build(len(labels), pairs, tuple(labels))


def load_edge_list(path: str | Path) -> Graph:
    """Read an edge-list file (optionally gzip-compressed) from disk."""
    with open(path, "rb") as fh:
        return parse_edge_list(fh)


def from_edges(edges: Iterable[tuple[int, int]], n: int | None = None) -> Graph:
    """Build a graph from integer id pairs.

    Ids must be non-negative.  ``n`` defaults to ``max(id) + 1``; pass it
    explicitly to keep trailing isolated nodes.  Self-loops and duplicates
    are discarded as in :func:`parse_edge_list`.
    """
    arr = np.asarray(list(edges), dtype=np.int64)
    if arr.size == 0:
        if n is None:
            raise GraphError("empty edge set and no node count given")
        return _build(int(n), np.empty((0, 2), dtype=np.int64), None)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError("edges must be (u, v) pairs")
    if arr.min() < 0:
        raise GraphError("node ids must be non-negative")
    inferred = int(arr.max()) + 1
    if n is None:
        n = inferred
    elif n < inferred:
        raise GraphError(f"node id {inferred - 1} out of range for n={n}")
    pairs = _canonical_pairs(arr[:, 0], arr[:, 1])
    return _build(int(n), pairs, None)


def degree(graph: Graph, node: int) -> int:
    """Number of neighbors of ``node``."""
    graph._check_node(node)
    return int(graph.indptr[node + 1] - graph.indptr[node])


def largest_connected_component(graph: Graph) -> Graph:
    """Restrict to the largest connected component.

    Kept nodes are re-densified to ``0..n'-1`` preserving their relative
    order, so label lookups and determinism survive the reduction.  Size
    ties go to the component holding the smallest internal id.  Already
    connected graphs come back equal, making the operation idempotent.
    """
    n = graph.node_count
    if n == 0:
        raise GraphError("empty graph has no components")
    visited = np.zeros(n, dtype=bool)
    best: np.ndarray | None = None
    for seed in range(n):
        if visited[seed]:
            continue
        visited[seed] = True
        frontier = np.array([seed], dtype=np.int64)
        members = [frontier]
        while frontier.size:
            neigh = _gather(graph.indptr, graph.indices, frontier)
            neigh = neigh[~visited[neigh]]
            if neigh.size == 0:
                break
            frontier = np.unique(neigh).astype(np.int64)
            visited[frontier] = True
            members.append(frontier)
        component = np.concatenate(members)
        if best is None or component.size > best.size:
            best = component
    keep = np.sort(best)
    remap = np.full(n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size, dtype=np.int64)

    src = np.repeat(np.arange(n, dtype=np.int64), graph.degrees)
    dst = graph.indices.astype(np.int64)
    mask = (src < dst) & (remap[src] >= 0) & (remap[dst] >= 0)
    pairs = np.stack([remap[src[mask]], remap[dst[mask]]], axis=1)
    ids = None
    if graph.original_ids is not None:
        ids = tuple(graph.original_ids[i] for i in keep)
    return _build(keep.size, pairs, ids)


def write_edge_list(graph: Graph) -> str:
    """Serialize to edge-list text that parses back to an equal graph.

    Lines come out in two blocks.  First, one introduction line per node in
    internal-id order, chosen so a re-parse assigns first-appearance ids
    identical to the current ones: a node with an already-introduced
    neighbor is introduced through that edge, a node whose smallest
    neighbor is the very next id brings it along on one line, and any
    other node gets a self-loop line (the parser drops the loop but keeps
    the label, pinning the position).  The remaining edges follow, each
    written once with the smaller endpoint first, sorted.  Ids and labels
    survive the round trip for every graph.
    """
    n = graph.node_count
    lines: list[tuple[int, int]] = []
    used: set[tuple[int, int]] = set()
    seen = np.zeros(n, dtype=bool)
    for k in range(n):
        if seen[k]:
            continue
        seen[k] = True
        nbrs = graph.neighbors(k)
        settled = nbrs[seen[nbrs]]
        if settled.size:
            j = int(settled[0])
            edge = (j, k) if j < k else (k, j)
        elif nbrs.size and int(nbrs[0]) == k + 1:
            # both endpoints unseen; the parser numbers them consecutively
            edge = (k, k + 1)
            seen[k + 1] = True
        else:
            # isolated, or every neighbor is unseen with an id beyond k+1;
            # a loop line fixes the label position without spending an edge
            lines.append((k, k))
            continue
        lines.append(edge)
        used.add(edge)
    src = np.repeat(np.arange(n, dtype=np.int64), graph.degrees)
    dst = graph.indices.astype(np.int64)
    mask = src < dst
    lo = src[mask]
    hi = dst[mask]
    for i in np.lexsort((lo, hi)):
        edge = (int(lo[i]), int(hi[i]))
        if edge not in used:
            lines.append(edge)
    return "".join(f"{graph.label(a)} {graph.label(b)}\n" for a, b in lines)


def save_edge_list(graph: Graph, path: str | Path) -> None:
    """Write :func:`write_edge_list` output to ``path`` (gzip if ``.gz``)."""
    text = write_edge_list(graph).encode("utf-8")
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "wb") as fh:
            fh.write(text)
    else:
        path.write_bytes(text)
