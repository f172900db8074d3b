"""Graph substrate: immutable adjacency, all-pairs distances, balls, intervals, BFS orders.

Vertices are dense ids ``0..n-1``. Input labels live in ``Graph.labels`` and are
only used for parsing and output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


class GraphError(ValueError):
    """Raised for malformed or disconnected graph input."""


class Graph:
    """Undirected simple connected graph with sorted adjacency lists.

    The all-pairs distance matrix is computed lazily and cached.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[object] | None = None,
        marks: dict[str, int] | None = None,
    ):
        if n < 1:
            raise GraphError("graph must have at least one vertex")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        self.n = n
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self.edge_count = m
        self.labels: tuple[object, ...] = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise GraphError("label table size does not match vertex count")
        self.marks: dict[str, int] = dict(marks or {})
        self._dist: np.ndarray | None = None
        self._check_connected()

    def _check_connected(self) -> None:
        seen = bfs_distances(self, 0)
        if (seen < 0).any():
            far = int(np.flatnonzero(seen < 0)[0])
            raise GraphError(
                f"graph not connected: no path between {self.labels[0]} and {self.labels[far]}"
            )

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def distances(self) -> np.ndarray:
        if self._dist is None:
            self._dist = all_pairs_distances(self)
        return self._dist

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns it with the new-id -> old-id map."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub_edges = [
            (index[u], index[w])
            for u in keep
            for w in self.adjacency[u]
            if w in index and u < w
        ]
        sub = Graph(len(keep), sub_edges, labels=[self.labels[v] for v in keep])
        return sub, keep

    def label_index(self) -> dict[object, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def bfs_distances(g: Graph, source: int, excluded: int | None = None, limit: int | None = None) -> np.ndarray:
    """Hop distances from ``source``; -1 marks unreachable (or beyond ``limit``).

    ``excluded`` is treated as deleted from the graph.
    """
    dist = np.full(g.n, -1, dtype=np.int32)
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in adj[u]:
            if w != excluded and dist[w] < 0:
                dist[w] = du + 1
                queue.append(w)
    return dist


def all_pairs_distances(g: Graph) -> np.ndarray:
    """n x n int32 hop-distance matrix."""
    if g.n == 1:
        return np.zeros((1, 1), dtype=np.int32)
    rows, cols = zip(*g.edges())
    adj = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(g.n, g.n)
    )
    d = shortest_path(adj, method="D", directed=False, unweighted=True)
    if np.isinf(d).any():
        u, v = np.argwhere(np.isinf(d))[0]
        raise GraphError(
            f"graph not connected: no path between {g.labels[u]} and {g.labels[v]}"
        )
    return d.astype(np.int32)


def ball(dm: np.ndarray, v: int, r: int) -> set[int]:
    return set(np.flatnonzero(dm[v] <= r).tolist())


def ball_excluding(g: Graph, v: int, r: int, excluded: int) -> set[int]:
    """Vertices within ``r`` hops of ``v`` in the graph with ``excluded`` deleted."""
    if v == excluded:
        raise GraphError("ball centre coincides with the excluded vertex")
    if r < 0:
        raise GraphError("radius must be nonnegative")
    d = bfs_distances(g, v, excluded=excluded, limit=r)
    return set(np.flatnonzero(d >= 0).tolist())


def interval_mask(dm: np.ndarray, u: int, v: int) -> np.ndarray:
    return dm[u] + dm[v] == dm[u, v]


def interval(dm: np.ndarray, u: int, v: int) -> set[int]:
    return set(np.flatnonzero(interval_mask(dm, u, v)).tolist())


def interval_masks(dm: np.ndarray) -> np.ndarray:
    """Boolean tensor ``M[u, v, x]`` = x lies in I(u, v). Uses n^3 bytes."""
    return (dm[:, None, :] + dm[None, :, :]) == dm[:, :, None]


@dataclass(frozen=True)
class BfsOrder:
    root: int
    order: tuple[int, ...]
    parent: tuple[int, ...]
    depth: tuple[int, ...]

    def rank(self) -> list[int]:
        rank = [0] * len(self.order)
        for i, v in enumerate(self.order):
            rank[v] = i
        return rank

    def ancestor(self, v: int, k: int) -> int:
        """Vertex at distance ``min(k, depth(v))`` from ``v`` on the tree path to the root."""
        for _ in range(min(k, self.depth[v])):
            v = self.parent[v]
        return v


def bfs_order(g: Graph, root: int) -> BfsOrder:
    """Layered BFS order: layers by distance, ids ascending inside a layer.

    The parent of a vertex is its smallest-id neighbour in the previous layer.
    """
    depth = bfs_distances(g, root)
    order = sorted(range(g.n), key=lambda v: (depth[v], v))
    parent = [root] * g.n
    for v in order[1:]:
        parent[v] = min(w for w in g.adjacency[v] if depth[w] == depth[v] - 1)
    return BfsOrder(root, tuple(order), tuple(parent), tuple(int(d) for d in depth))
