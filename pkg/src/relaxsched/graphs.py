"""Dependency graphs, priority permutations, generators, and file I/O.

A dependency graph is a simple undirected graph over dense vertex ids
``0..n-1``, stored in compressed sparse row form (an offset array plus a
flat, per-vertex-sorted neighbor array).  A priority permutation assigns
each vertex a distinct label in ``0..n-1``; lower label means higher
priority.  Orienting every edge from its smaller-labeled endpoint to its
larger-labeled one turns the graph into a DAG: the smaller-labeled
endpoint is the *predecessor*, the larger-labeled one the *successor*.

Edge-list file format: first line ``n m``, then m lines ``u v`` with
``0 <= u < v < n``, whitespace separated, one edge per line, no comments.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np


class EdgeListError(ValueError):
    """Raised when an edge-list file violates the format; names the line."""


class DependencyGraph:
    """Simple undirected graph in CSR form.

    Immutable after construction and therefore safe to share across
    worker threads.  ``offsets`` has length n+1; the neighbors of v are
    ``adj[offsets[v]:offsets[v+1]]``, sorted ascending.  Each undirected
    edge appears once per endpoint, so ``len(adj) == 2 * m``.
    """

    __slots__ = ("n", "offsets", "adj")

    def __init__(self, n: int, offsets: np.ndarray, adj: np.ndarray):
        self.n = int(n)
        self.offsets = offsets
        self.adj = adj

    @classmethod
    def from_edges(cls, n: int, edges) -> "DependencyGraph":
        """Build and validate a graph from an iterable of (u, v) pairs.

        Rejects vertex ids out of range, self-loops, and duplicate edges
        (regardless of endpoint order).
        """
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        m = e.shape[0]
        if m:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range [0, n)")
            if (e[:, 0] == e[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            lo = np.minimum(e[:, 0], e[:, 1])
            hi = np.maximum(e[:, 0], e[:, 1])
            if np.unique(lo * n + hi).size != m:
                raise ValueError("duplicate edges are not allowed")
        both = np.concatenate([e, e[:, ::-1]]) if m else np.empty((0, 2), dtype=np.int64)
        order = np.lexsort((both[:, 1], both[:, 0]))
        adj = np.ascontiguousarray(both[order][:, 1])
        counts = np.bincount(both[:, 0], minlength=n) if n else np.zeros(0, dtype=np.int64)
        offsets = np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(counts)])
        return cls(n, offsets, adj)

    @property
    def m(self) -> int:
        return len(self.adj) // 2

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj[self.offsets[v]:self.offsets[v + 1]]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each undirected edge once, as (u, v) with u < v, in
        lexicographic order."""
        offsets = self.offsets.tolist()
        adj = self.adj.tolist()
        for u in range(self.n):
            for i in range(offsets[u], offsets[u + 1]):
                v = adj[i]
                if u < v:
                    yield u, v

    def __eq__(self, other) -> bool:
        return (isinstance(other, DependencyGraph)
                and self.n == other.n
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.adj, other.adj))

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"DependencyGraph(n={self.n}, m={self.m})"


class Permutation:
    """Bijection between vertex ids and priority labels.

    ``labels[v]`` is the label of vertex v; ``inverse[t]`` is the vertex
    holding label t.  Lower label = higher priority.
    """

    __slots__ = ("labels", "inverse")

    def __init__(self, labels):
        labels = np.asarray(labels, dtype=np.int64)
        n = len(labels)
        if n and (labels.min() < 0 or labels.max() >= n
                  or np.bincount(labels, minlength=n).max() != 1):
            raise ValueError("labels must be a bijection on [0, n)")
        inverse = np.empty(n, dtype=np.int64)
        inverse[labels] = np.arange(n)
        self.labels = labels
        self.inverse = inverse

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"Permutation(n={self.n})"


def random_permutation(n: int, seed: int) -> Permutation:
    """Uniformly random priority permutation; deterministic per seed."""
    rng = np.random.default_rng(seed)
    return Permutation(rng.permutation(n))


def predecessors(g: DependencyGraph, perm: Permutation, v: int) -> list[int]:
    """Neighbors of v with a strictly smaller label, ascending by id."""
    lv = perm.labels[v]
    return [int(u) for u in g.neighbors(v) if perm.labels[u] < lv]


def successors(g: DependencyGraph, perm: Permutation, v: int) -> list[int]:
    """Neighbors of v with a strictly larger label, ascending by id."""
    lv = perm.labels[v]
    return [int(u) for u in g.neighbors(v) if perm.labels[u] > lv]


def _sample_distinct_pairs(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    # Rejection-sample unordered pairs until m distinct ones accumulate.
    # Fine at desk scale where m is well below n^2 / 2.
    seen: set[int] = set()
    out: list[tuple[int, int]] = []
    while len(out) < m:
        batch = max(1024, int(1.3 * (m - len(out))))
        us = rng.integers(0, n, batch).tolist()
        vs = rng.integers(0, n, batch).tolist()
        for a, b in zip(us, vs):
            if a == b:
                continue
            if a > b:
                a, b = b, a
            key = a * n + b
            if key in seen:
                continue
            seen.add(key)
            out.append((a, b))
            if len(out) == m:
                break
    return out


def gen_gnm(n: int, m: int, seed: int) -> DependencyGraph:
    """Uniform random graph with exactly m distinct edges."""
    if n <= 0:
        raise ValueError("n must be positive")
    max_m = n * (n - 1) // 2
    if not 0 <= m <= max_m:
        raise ValueError(f"m must be in [0, {max_m}] for n={n}")
    rng = np.random.default_rng(seed)
    return DependencyGraph.from_edges(n, _sample_distinct_pairs(n, m, rng))


def gen_gnp(n: int, p: float, seed: int) -> DependencyGraph:
    """Random graph including each unordered pair independently with
    probability p.

    Sampled in two equivalent stages: the edge count is binomial over the
    pair count, then a uniform subset of that size is drawn.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    if m == total:
        return complete_graph(n)
    return DependencyGraph.from_edges(n, _sample_distinct_pairs(n, m, rng))


def complete_graph(n: int) -> DependencyGraph:
    if n <= 0:
        raise ValueError("n must be positive")
    iu, iv = np.triu_indices(n, k=1)
    return DependencyGraph.from_edges(n, np.column_stack([iu, iv]))


def path_graph(n: int) -> DependencyGraph:
    """Chain 0 - 1 - ... - (n-1)."""
    if n <= 0:
        raise ValueError("n must be positive")
    ids = np.arange(n - 1)
    return DependencyGraph.from_edges(n, np.column_stack([ids, ids + 1]))


def line_graph(g: DependencyGraph) -> tuple[DependencyGraph, list[tuple[int, int]]]:
    """Line graph of g plus the map from its vertices back to g's edges.

    Vertex i of the result corresponds to the i-th edge of ``g.edges()``;
    two vertices are adjacent iff the underlying edges share an endpoint.
    """
    edge_list = list(g.edges())
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(edge_list):
        incident[u].append(eid)
        incident[v].append(eid)
    line_edges: list[tuple[int, int]] = []
    for ids in incident:
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                line_edges.append((ids[i], ids[j]))
    return DependencyGraph.from_edges(len(edge_list), line_edges), edge_list


def save_edge_list(g: DependencyGraph, path) -> None:
    """Write g in the edge-list text format."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def load_edge_list(path) -> DependencyGraph:
    """Parse an edge-list file; raises EdgeListError naming the bad line."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EdgeListError("line 1: missing header")
    head = lines[0].split()
    if len(head) != 2:
        raise EdgeListError("line 1: malformed header, expected 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise EdgeListError("line 1: malformed header, expected two integers") from None
    if n < 0 or m < 0:
        raise EdgeListError("line 1: n and m must be nonnegative")
    if len(lines) - 1 != m:
        raise EdgeListError(f"line 1: header declares {m} edges, file has {len(lines) - 1}")
    edges: list[tuple[int, int]] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: expected two integers") from None
        if u == v:
            raise EdgeListError(f"line {lineno}: self-loop {u} {v}")
        if not 0 <= u < v < n:
            raise EdgeListError(f"line {lineno}: edge {u} {v} violates 0 <= u < v < n")
        key = u * n + v
        if key in seen:
            raise EdgeListError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append((u, v))
    return DependencyGraph.from_edges(n, edges)
