"""Sequential execution loops: exact order and relaxed-scheduler order.

Both loops drive a problem through its hooks until every task is
processed or discarded.  The exact loop visits tasks in strictly
increasing label order and never wastes a step.  The relaxed loop pulls
tasks from a scheduler that may return them out of order; a task that
still has an unprocessed blocking predecessor is reinserted under its
original priority and the attempt is counted as a *failed delete*.
Because blocked tasks are never processed early, the relaxed loop
produces exactly the output of the exact loop on the same instance, for
any scheduler and any seed.

Iteration accounting: every deletion is one iteration, and each is
exactly one of processed / failed delete / fast discard.  Fast discards
(tasks withdrawn without processing, e.g. nodes killed by a neighbor's
selection) replace a task's processing, so the total is always
``n + failed_deletes``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import DependencyGraph, Permutation
from .schedulers import InstrumentedScheduler, Scheduler


class SchedulerContractError(RuntimeError):
    """Watchdog signal: the scheduler lost tasks or starved one forever."""


class ProblemHooks:
    """Problem-specific behavior plugged into the execution loops.

    ``process(v)`` is called at most once per task, and only when
    ``is_ready(v)`` is true.  Readiness must be monotone: once a task is
    ready it stays ready.  ``should_discard(v)`` lets a problem withdraw
    a task without processing it (it is consulted before readiness).

    Instances also expose ``graph`` (the dependency structure the engine
    runs over) and ``perm`` (its priority permutation); problems that
    derive their own dependency structure build both themselves.
    """

    graph: DependencyGraph
    perm: Permutation

    def should_discard(self, v: int) -> bool:
        return False

    def is_ready(self, v: int) -> bool:
        raise NotImplementedError

    def process(self, v: int) -> None:
        raise NotImplementedError

    def result(self):
        """Canonical output of the finished problem."""
        raise NotImplementedError


@dataclass
class ExecutionStats:
    """Counters for one execution.

    ``total_iterations == processed + failed_deletes + fast_discards``
    always holds; ``extra_iterations`` is the relaxation overhead
    (total beyond one iteration per task).
    """

    tasks: int = 0
    total_iterations: int = 0
    failed_deletes: int = 0
    fast_discards: int = 0
    processed: int = 0
    trace: list[int] = field(default_factory=list)
    rank_log: list[int] | None = None
    inversion_counts: dict[int, int] | None = None

    @property
    def extra_iterations(self) -> int:
        return self.total_iterations - self.tasks


def run_exact(g: DependencyGraph, perm: Permutation, hooks: ProblemHooks):
    """Process every task in strictly increasing label order.

    Returns (output, stats) with ``total_iterations == n`` and zero
    failed deletes.
    """
    stats = ExecutionStats(tasks=g.n)
    trace = stats.trace
    for v in perm.inverse.tolist():
        stats.total_iterations += 1
        if hooks.should_discard(v):
            stats.fast_discards += 1
            continue
        hooks.process(v)
        stats.processed += 1
        trace.append(v)
    return hooks.result(), stats


def run_relaxed(g: DependencyGraph, perm: Permutation, hooks: ProblemHooks,
                scheduler: Scheduler, max_iterations: int | None = None):
    """Drive the problem through a freshly constructed scheduler.

    Every task is inserted under its label; blocked tasks are reinserted
    under the same label.  Terminates when the scheduler drains.  The
    watchdog bound (default ``n**2 + 10**7``) can only trip if the
    scheduler violates its conservation or fairness contract.
    """
    n = g.n
    if max_iterations is None:
        max_iterations = n * n + 10 ** 7
    labels = perm.labels.tolist()
    for v in range(n):
        scheduler.insert(v, labels[v])

    stats = ExecutionStats(tasks=n)
    trace = stats.trace
    iterations = failed = discards = processed = 0
    get = scheduler.approx_get_min
    reinsert = scheduler.insert
    should_discard = hooks.should_discard
    is_ready = hooks.is_ready
    process = hooks.process
    while True:
        got = get()
        if got is None:
            break
        iterations += 1
        if iterations > max_iterations:
            raise SchedulerContractError(
                f"no termination after {max_iterations} iterations "
                f"({processed}/{n} tasks processed)")
        v, priority = got
        if should_discard(v):
            discards += 1
            continue
        if not is_ready(v):
            reinsert(v, priority)
            failed += 1
            continue
        process(v)
        processed += 1
        trace.append(v)

    stats.total_iterations = iterations
    stats.failed_deletes = failed
    stats.fast_discards = discards
    stats.processed = processed
    if isinstance(scheduler, InstrumentedScheduler):
        stats.rank_log = scheduler.rank_log
        stats.inversion_counts = dict(scheduler.inversion_counts)
    return hooks.result(), stats
