"""Experiment plumbing shared by the CLI and the acceptance suite:
problem setups, scheduler factories, and output checksums."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Callable

from .engine import ProblemHooks
from .graphs import DependencyGraph, Permutation, line_graph, random_permutation
from .problems import (ColoringHooks, KnuthShuffleHooks, ListContractionHooks,
                       MatchingHooks, MISHooks, random_swap_targets)
from .schedulers import (ExactScheduler, MultiQueueScheduler, Scheduler,
                         TopKUniformScheduler)
from .seeds import split_seed

PROBLEMS = ("mis", "matching", "coloring", "listcontract", "shuffle")

SCHEDULERS = ("exact", "topk", "multiqueue")


@dataclass
class ProblemSetup:
    """One runnable instance: the dependency structure the engine runs
    over, its priority permutation, and a factory for fresh hook state."""

    problem: str
    graph: DependencyGraph
    perm: Permutation
    make_hooks: Callable[[], ProblemHooks]


def build_problem(problem: str, seed: int, graph: DependencyGraph | None = None,
                  size: int | None = None) -> ProblemSetup:
    """Assemble a ProblemSetup.

    Graph problems (mis, matching, coloring) take ``graph``; the
    self-structured ones (listcontract, shuffle) take ``size``.  ``seed``
    feeds the permutation (and the shuffle's swap targets) through
    labeled splits.
    """
    if problem in ("mis", "matching", "coloring"):
        if graph is None:
            raise ValueError(f"problem {problem!r} needs a graph")
        if problem == "matching":
            line = line_graph(graph)
            perm = random_permutation(line[0].n, split_seed(seed, "perm"))
            return ProblemSetup("matching", line[0], perm,
                                lambda: MatchingHooks(graph, perm, line=line))
        perm = random_permutation(graph.n, split_seed(seed, "perm"))
        hooks_cls = MISHooks if problem == "mis" else ColoringHooks
        return ProblemSetup(problem, graph, perm, lambda: hooks_cls(graph, perm))
    if problem == "listcontract":
        if size is None:
            raise ValueError("listcontract needs a size")
        perm = random_permutation(size, split_seed(seed, "perm"))
        make = lambda: ListContractionHooks(size, perm)  # noqa: E731
        return ProblemSetup("listcontract", make().graph, perm, make)
    if problem == "shuffle":
        if size is None:
            raise ValueError("shuffle needs a size")
        targets = random_swap_targets(size, split_seed(seed, "targets"))
        items = list(range(size))
        make = lambda: KnuthShuffleHooks(items, targets)  # noqa: E731
        return ProblemSetup("shuffle", make().graph, Permutation.identity(size), make)
    raise ValueError(f"unknown problem {problem!r}; choose from {PROBLEMS}")


def make_scheduler(kind: str, param: int, seed: int) -> Scheduler:
    """Instantiate a scheduler by name; ``param`` is k for topk and the
    queue count for multiqueue (ignored for exact)."""
    if kind == "exact":
        return ExactScheduler()
    if kind == "topk":
        return TopKUniformScheduler(param, seed)
    if kind == "multiqueue":
        return MultiQueueScheduler(param, seed)
    raise ValueError(f"unknown scheduler {kind!r}; choose from {SCHEDULERS}")


def output_checksum(output) -> str:
    """Canonical hash of a problem output, for determinism comparisons
    across schedulers, seeds, and worker counts."""
    payload = json.dumps(output, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
