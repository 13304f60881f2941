"""Multi-worker execution over the concurrent MultiQueue scheduler.

Workers run the relaxed loop independently: pop a task, discard it if
the problem withdrew it, reinsert it if a blocking predecessor is still
unprocessed, otherwise process it.  Determinism of the output is
preserved under any interleaving because readiness checks act
conservatively on in-flight state: anything not yet published in final
form reads as "blocked", the task goes back to the scheduler, and the
hook invariants rule out a task being killed or overtaken between its
readiness check and its processing.

Memory model: per-task state lives in plain Python lists.  On CPython
the interpreter lock makes every single-slot load and store atomic and
globally ordered, which is all the state machine needs -- transitions
write a terminal value exactly once, and readers act conservatively on
anything non-terminal.  Queue structure itself is guarded by the
MultiQueue's per-queue locks.

Termination is detected with a shared outstanding-task counter rather
than by observing empty queue samples, which are false negatives while
another worker holds the last task in hand.
"""

from __future__ import annotations

import threading
import time

from .engine import ExecutionStats, ProblemHooks, SchedulerContractError
from .graphs import DependencyGraph, Permutation
from .schedulers import MultiQueueScheduler

_IDLE_LIMIT = 2_000_000  # consecutive empty pops before declaring livelock


def parallel_run(g: DependencyGraph, perm: Permutation, hooks: ProblemHooks,
                 workers: int, queues: int | None = None, seed: int = 0,
                 backoff: str = "reinsert", spin_limit: int = 64,
                 max_iterations: int | None = None):
    """Execute ``hooks`` with ``workers`` threads over a MultiQueue.

    ``queues`` defaults to 4x the worker count.  ``backoff`` selects what
    a worker does with a blocked task: ``"reinsert"`` puts it back and
    moves on; ``"spin"`` re-checks readiness up to ``spin_limit`` times
    first.  Returns (output, stats) with per-worker counters summed; the
    processing trace is not recorded (there is no meaningful global
    order to record).
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if queues is None:
        queues = 4 * workers
    if queues < workers:
        raise ValueError("queue count must be at least the worker count")
    if backoff not in ("reinsert", "spin"):
        raise ValueError("backoff must be 'reinsert' or 'spin'")

    n = g.n
    cap = max_iterations if max_iterations is not None else n * n + 10 ** 7
    scheduler = MultiQueueScheduler(queues, seed)
    labels = perm.labels.tolist()
    for v in range(n):
        scheduler.insert(v, labels[v])

    remaining = [n]
    count_lock = threading.Lock()
    stop = threading.Event()
    errors: list[BaseException] = []
    counters = [[0, 0, 0, 0] for _ in range(workers)]  # iter, failed, discard, processed

    def finalize_one() -> None:
        with count_lock:
            remaining[0] -= 1

    def work(wid: int) -> None:
        mine = counters[wid]
        get = scheduler.approx_get_min
        reinsert = scheduler.insert
        should_discard = hooks.should_discard
        is_ready = hooks.is_ready
        process = hooks.process
        spin = backoff == "spin"
        idle = 0
        try:
            while not stop.is_set() and remaining[0] > 0:
                got = get()
                if got is None:
                    idle += 1
                    if idle > _IDLE_LIMIT:
                        raise SchedulerContractError(
                            f"worker {wid}: no task surfaced after {idle} attempts "
                            f"with {remaining[0]} tasks outstanding")
                    if idle % 1024 == 0:
                        time.sleep(0)
                    continue
                idle = 0
                mine[0] += 1
                if mine[0] > cap:
                    raise SchedulerContractError(
                        f"worker {wid}: exceeded {cap} iterations")
                v, priority = got
                if should_discard(v):
                    mine[2] += 1
                    finalize_one()
                    continue
                ready = is_ready(v)
                if not ready and spin:
                    for _ in range(spin_limit):
                        if is_ready(v):
                            ready = True
                            break
                if not ready:
                    reinsert(v, priority)
                    mine[1] += 1
                    continue
                process(v)
                mine[3] += 1
                finalize_one()
        except BaseException as exc:
            errors.append(exc)
            stop.set()

    threads = [threading.Thread(target=work, args=(wid,), name=f"relaxsched-worker-{wid}")
               for wid in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    if errors:
        raise errors[0]
    if remaining[0] != 0:
        raise SchedulerContractError(
            f"workers exited with {remaining[0]} tasks outstanding")

    stats = ExecutionStats(tasks=n)
    stats.total_iterations = sum(c[0] for c in counters)
    stats.failed_deletes = sum(c[1] for c in counters)
    stats.fast_discards = sum(c[2] for c in counters)
    stats.processed = sum(c[3] for c in counters)
    return hooks.result(), stats
