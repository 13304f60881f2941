"""Problem instantiations: hooks, reference oracles, and diagnostics.

Five problems plug into the execution loops:

* greedy maximal independent set (MIS) -- with dead-node fast discard
* maximal matching -- MIS on the line graph of the input
* greedy vertex coloring
* list contraction on a doubly linked chain
* Knuth shuffle with a fixed swap-target array

Each hooks object carries its own dependency graph and permutation
(``hooks.graph`` / ``hooks.perm``) plus the mutable problem state, and
yields a canonical, JSON-serializable output via ``result()``.

State words are plain list slots written once per transition, so the
hooks stay safe when driven by multiple threads on CPython (single-slot
loads and stores are atomic under the interpreter lock); list
contraction additionally serializes its two-pointer splices.  See the
parallel module for the full argument.
"""

from __future__ import annotations

import threading

import numpy as np

from .engine import ProblemHooks
from .graphs import DependencyGraph, Permutation, line_graph, path_graph

LIVE, DEAD, IN_MIS = 0, 1, 2

_NIL = -1  # list-contraction sentinel for "no neighbor"


class MISHooks(ProblemHooks):
    """Greedy MIS state machine.

    A vertex is ready once every smaller-labeled neighbor is dead; dead
    here is terminal, so readiness is monotone.  A vertex whose
    smaller-labeled neighbor already joined the set is treated as
    blocked, not ready -- its own kill mark may still be in flight when
    workers run concurrently.  Dead vertices surfacing from the
    scheduler are withdrawn without processing or reinsertion.
    """

    def __init__(self, g: DependencyGraph, perm: Permutation):
        self.graph = g
        self.perm = perm
        self._offsets = g.offsets.tolist()
        self._adj = g.adj.tolist()
        self._labels = perm.labels.tolist()
        self.status = [LIVE] * g.n
        self._members: list[int] = []

    def should_discard(self, v: int) -> bool:
        return self.status[v] == DEAD

    def is_ready(self, v: int) -> bool:
        offsets, adj, labels, status = self._offsets, self._adj, self._labels, self.status
        lv = labels[v]
        for u in adj[offsets[v]:offsets[v + 1]]:
            if labels[u] < lv and status[u] != DEAD:
                return False
        return True

    def process(self, v: int) -> None:
        status = self.status
        status[v] = IN_MIS
        self._members.append(v)
        for u in self._adj[self._offsets[v]:self._offsets[v + 1]]:
            if status[u] == LIVE:
                status[u] = DEAD

    def result(self) -> list[int]:
        return sorted(self._members)


class MatchingHooks(MISHooks):
    """Maximal matching as MIS over the line graph of the input.

    ``line`` may carry a precomputed ``(line_graph, edge_map)`` pair so
    repeated trials on one input skip the reduction.
    """

    def __init__(self, g: DependencyGraph, edge_perm: Permutation, line=None):
        lg, edge_map = line if line is not None else line_graph(g)
        if edge_perm.n != lg.n:
            raise ValueError("edge permutation size must equal the edge count")
        super().__init__(lg, edge_perm)
        self._edge_map = edge_map

    def result(self) -> list[tuple[int, int]]:
        return sorted(self._edge_map[e] for e in self._members)


class ColoringHooks(ProblemHooks):
    """Greedy vertex coloring: each vertex takes the smallest color
    absent among its smaller-labeled neighbors."""

    def __init__(self, g: DependencyGraph, perm: Permutation):
        self.graph = g
        self.perm = perm
        self._offsets = g.offsets.tolist()
        self._adj = g.adj.tolist()
        self._labels = perm.labels.tolist()
        self.colors: list[int | None] = [None] * g.n

    def is_ready(self, v: int) -> bool:
        offsets, adj, labels, colors = self._offsets, self._adj, self._labels, self.colors
        lv = labels[v]
        for u in adj[offsets[v]:offsets[v + 1]]:
            if labels[u] < lv and colors[u] is None:
                return False
        return True

    def process(self, v: int) -> None:
        labels, colors = self._labels, self.colors
        lv = labels[v]
        used = {colors[u] for u in self._adj[self._offsets[v]:self._offsets[v + 1]]
                if labels[u] < lv}
        c = 0
        while c in used:
            c += 1
        colors[v] = c

    def result(self) -> list[int]:
        return list(self.colors)


class ListContractionHooks(ProblemHooks):
    """Contract a doubly linked chain of n nodes (ids in chain order).

    Contracting v swings its neighbors' pointers past it.  Readiness
    tracks the *current* pointers: v may go only when neither live
    neighbor has a smaller label.  This is exactly what keeps the
    recorded (previous, next) pair per node equal to the exact-order
    record: a ready node's neighbors cannot be contracted before it, so
    readiness is monotone and splices never interleave.

    A splice must publish both pointer writes atomically: a reader that
    catches one half could judge itself ready and start a conflicting
    splice.  Readiness reads stay lock-free; against whole splices they
    are conservative (a stale pointer always shows a smaller label).
    """

    def __init__(self, n: int, perm: Permutation):
        if perm.n != n:
            raise ValueError("permutation size must equal the list length")
        self.graph = path_graph(n)
        self.perm = perm
        self._labels = perm.labels.tolist()
        self.next = [i + 1 for i in range(n - 1)] + [_NIL]
        self.prev = [_NIL] + list(range(n - 1))
        self._records: list[tuple[int, int] | None] = [None] * n
        self._splice_lock = threading.Lock()

    def is_ready(self, v: int) -> bool:
        labels = self._labels
        lv = labels[v]
        p = self.prev[v]
        if p != _NIL and labels[p] < lv:
            return False
        nx = self.next[v]
        return nx == _NIL or labels[nx] > lv

    def process(self, v: int) -> None:
        with self._splice_lock:
            p = self.prev[v]
            nx = self.next[v]
            self._records[v] = (p, nx)
            if nx != _NIL:
                self.prev[nx] = p
            if p != _NIL:
                self.next[p] = nx

    def result(self) -> list[tuple[int, int]]:
        return list(self._records)


class KnuthShuffleHooks(ProblemHooks):
    """Apply swaps A[i] <-> A[targets[i]] so the final array equals the
    sequential pass for the same targets.

    Tasks conflict when they touch a common cell: i < j collide iff
    targets[j] == i or targets[j] == targets[i].  Conflicting tasks must
    run in index order, so priorities are the identity permutation; the
    randomness of the instance lives entirely in the target array.
    """

    def __init__(self, items, targets):
        targets = list(targets)
        n = len(targets)
        items = list(items)
        if len(items) != n:
            raise ValueError("items and targets must have equal length")
        for i, t in enumerate(targets):
            if not 0 <= t <= i:
                raise ValueError(f"targets[{i}]={t} violates 0 <= target <= index")
        self.graph = shuffle_conflict_graph(targets)
        self.perm = Permutation.identity(n)
        self._offsets = self.graph.offsets.tolist()
        self._adj = self.graph.adj.tolist()
        self._targets = targets
        self.array = items
        self._done = [False] * n

    def is_ready(self, v: int) -> bool:
        done = self._done
        for u in self._adj[self._offsets[v]:self._offsets[v + 1]]:
            if u < v and not done[u]:
                return False
        return True

    def process(self, v: int) -> None:
        a = self.array
        t = self._targets[v]
        a[v], a[t] = a[t], a[v]
        self._done[v] = True

    def result(self) -> list:
        return list(self.array)


def mis_hooks(g: DependencyGraph, perm: Permutation) -> MISHooks:
    return MISHooks(g, perm)


def matching_hooks(g: DependencyGraph, edge_perm: Permutation) -> MatchingHooks:
    return MatchingHooks(g, edge_perm)


def coloring_hooks(g: DependencyGraph, perm: Permutation) -> ColoringHooks:
    return ColoringHooks(g, perm)


def list_contraction_hooks(n: int, perm: Permutation) -> ListContractionHooks:
    return ListContractionHooks(n, perm)


def knuth_shuffle_hooks(items, targets) -> KnuthShuffleHooks:
    return KnuthShuffleHooks(items, targets)


def shuffle_conflict_graph(targets) -> DependencyGraph:
    """Dependency structure of the shuffle: an edge per shared cell.

    For a random target array the edge count concentrates near 2n; a
    degenerate array (all targets equal) degrades to a clique.
    """
    targets = list(targets)
    n = len(targets)
    edges: set[tuple[int, int]] = set()
    by_target: dict[int, list[int]] = {}
    for j, t in enumerate(targets):
        if t != j:
            edges.add((t, j))  # t <= j and t != j, so already ordered
        by_target.setdefault(t, []).append(j)
    for group in by_target.values():
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                edges.add((group[a], group[b]))
    return DependencyGraph.from_edges(n, sorted(edges))


def random_swap_targets(n: int, seed: int) -> list[int]:
    """Uniform targets[i] in [0, i], the classic in-place shuffle plan."""
    rng = np.random.default_rng(seed)
    if n == 0:
        return []
    return rng.integers(0, np.arange(1, n + 1)).tolist()


def fisher_yates(items, targets) -> list:
    """Sequential reference: apply swaps in index order."""
    a = list(items)
    for i, t in enumerate(targets):
        a[i], a[t] = a[t], a[i]
    return a


def greedy_mis_reference(g: DependencyGraph, perm: Permutation) -> list[int]:
    """Sequential greedy oracle: scan labels ascending, add a vertex iff
    none of its neighbors was added before it."""
    offsets = g.offsets.tolist()
    adj = g.adj.tolist()
    in_set = [False] * g.n
    members: list[int] = []
    for v in perm.inverse.tolist():
        for u in adj[offsets[v]:offsets[v + 1]]:
            if in_set[u]:
                break
        else:
            in_set[v] = True
            members.append(v)
    return sorted(members)


def compute_hot_edges(g: DependencyGraph, perm: Permutation) -> list[tuple[int, int]]:
    """For each vertex outside the greedy MIS, the edge to its
    smallest-labeled neighbor inside it.

    Maximality puts exactly one such edge on every non-member, so the
    returned list has n - |MIS| entries (one per non-member v, as
    (member, v) pairs ordered by v).
    """
    labels = perm.labels.tolist()
    in_set = [False] * g.n
    for v in greedy_mis_reference(g, perm):
        in_set[v] = True
    hot: list[tuple[int, int]] = []
    for v in range(g.n):
        if in_set[v]:
            continue
        best = -1
        for u in g.neighbors(v).tolist():
            if in_set[u] and (best == -1 or labels[u] < labels[best]):
                best = u
        if best != -1:
            hot.append((best, v))
    return hot
