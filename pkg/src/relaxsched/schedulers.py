"""Relaxed priority schedulers and rank/inversion instrumentation.

A scheduler holds (task, priority) pairs and offers three operations:
``insert``, ``approx_get_min`` (remove and return some held pair, ideally
of low priority), and ``empty``.  All implementations guarantee
conservation: every inserted pair is returned exactly once per insertion.
What varies is how far ``approx_get_min`` may stray from the true
minimum.

The *rank* of a deletion is the position of the returned task among all
tasks held at that moment (1 = the true minimum).  A task suffers a
*priority inversion* whenever a deletion returns a lower-priority task
while it is held.  Priorities in this package are permutation labels, so
they are always distinct and never need tie-breaking.

Three implementations:

* ``ExactScheduler``     -- a binary heap; every deletion has rank 1.
* ``TopKUniformScheduler`` -- returns a uniform choice among the k
  smallest held priorities; rank never exceeds k.
* ``MultiQueueScheduler``  -- c internal heaps; insert to a random one,
  delete the smaller minimum of two random ones.  Rank is unbounded but
  its tail decays exponentially at scale proportional to c.  Safe for
  concurrent use (per-queue locks).
"""

from __future__ import annotations

import heapq
import random
import threading
from bisect import bisect_left, insort
from collections import Counter


class Scheduler:
    """Contract shared by all scheduler implementations."""

    def insert(self, task: int, priority: int) -> None:
        raise NotImplementedError

    def approx_get_min(self) -> tuple[int, int] | None:
        """Remove and return a held (task, priority) pair, or None."""
        raise NotImplementedError

    def empty(self) -> bool:
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError


class ExactScheduler(Scheduler):
    """Strict priority queue; ``approx_get_min`` is true delete-min."""

    def __init__(self):
        self._heap: list[tuple[int, int]] = []

    def insert(self, task: int, priority: int) -> None:
        heapq.heappush(self._heap, (priority, task))

    def approx_get_min(self) -> tuple[int, int] | None:
        if not self._heap:
            return None
        priority, task = heapq.heappop(self._heap)
        return task, priority

    def empty(self) -> bool:
        return not self._heap

    def __len__(self) -> int:
        return len(self._heap)


class TopKUniformScheduler(Scheduler):
    """Uniform choice among the min(k, held) smallest priorities.

    Keeps the k smallest pairs in a small sorted front list and the rest
    in a heap, so every operation costs O(k + log n).  Deletions never
    return anything outside the current top k.
    """

    def __init__(self, k: int, seed: int = 0):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self._rng = random.Random(seed)
        self._front: list[tuple[int, int]] = []  # sorted, len <= k
        self._back: list[tuple[int, int]] = []   # heap, all >= front[-1]

    def insert(self, task: int, priority: int) -> None:
        entry = (priority, task)
        front = self._front
        if len(front) < self.k:
            insort(front, entry)
        elif entry < front[-1]:
            insort(front, entry)
            heapq.heappush(self._back, front.pop())
        else:
            heapq.heappush(self._back, entry)

    def approx_get_min(self) -> tuple[int, int] | None:
        front = self._front
        if not front:
            return None
        priority, task = front.pop(self._rng.randrange(len(front)))
        if self._back:
            front.append(heapq.heappop(self._back))
        return task, priority

    def empty(self) -> bool:
        return not self._front

    def __len__(self) -> int:
        return len(self._front) + len(self._back)


class MultiQueueScheduler(Scheduler):
    """c heaps; power-of-two-choices deletion.

    ``insert`` pushes into a queue chosen uniformly at random.
    ``approx_get_min`` samples two queues uniformly with replacement,
    compares their minima, and pops the smaller.  An empty sampled pair
    is resampled up to c * ceil(log2(c) + 1) times before falling back to
    a linear scan, which guarantees no held task is ever stranded.

    All three operations are safe under concurrent invocation: each
    queue carries its own lock, acquired non-blocking during sampling
    (contended queues are simply resampled).
    """

    def __init__(self, c: int, seed: int = 0):
        if c < 1:
            raise ValueError("queue count must be >= 1")
        self.c = c
        self._rng = random.Random(seed)
        self._queues: list[list[tuple[int, int]]] = [[] for _ in range(c)]
        self._locks = [threading.Lock() for _ in range(c)]
        log2c = max(0, (c - 1).bit_length())
        self._max_empty_retries = c * (log2c + 1)

    def insert(self, task: int, priority: int) -> None:
        i = self._rng.randrange(self.c)
        with self._locks[i]:
            heapq.heappush(self._queues[i], (priority, task))

    def approx_get_min(self) -> tuple[int, int] | None:
        queues, locks, rng = self._queues, self._locks, self._rng
        empty_retries = 0
        contended_retries = 0
        while (empty_retries <= self._max_empty_retries
               and contended_retries <= 4 * self._max_empty_retries + self.c):
            i = rng.randrange(self.c)
            j = rng.randrange(self.c)
            if not locks[i].acquire(blocking=False):
                contended_retries += 1
                continue
            if j != i and not locks[j].acquire(blocking=False):
                locks[i].release()
                contended_retries += 1
                continue
            try:
                qi, qj = queues[i], queues[j]
                pick = None
                if qi and (not qj or qi[0] <= qj[0]):
                    pick = qi
                elif qj:
                    pick = qj
                if pick is not None:
                    priority, task = heapq.heappop(pick)
                    return task, priority
            finally:
                if j != i:
                    locks[j].release()
                locks[i].release()
            empty_retries += 1
        return self._scan()

    def _scan(self) -> tuple[int, int] | None:
        # Blocking fallback: take the first nonempty queue in index order.
        for i in range(self.c):
            with self._locks[i]:
                if self._queues[i]:
                    priority, task = heapq.heappop(self._queues[i])
                    return task, priority
        return None

    def empty(self) -> bool:
        return not any(self._queues)

    def __len__(self) -> int:
        return sum(len(q) for q in self._queues)


class InstrumentedScheduler(Scheduler):
    """Wrapper measuring exact ranks and per-task priority inversions.

    Maintains a mirror sorted index of held priorities, so it serializes
    the inner scheduler and is meant for single-threaded simulation only.

    ``rank_log[t]`` is 1 + the number of held tasks with priority
    strictly below the one returned by the t-th deletion.
    ``inversion_counts[u]`` grows by one exactly when a deletion returns
    a priority above u's while u is held.
    """

    def __init__(self, inner: Scheduler):
        self.inner = inner
        self.rank_log: list[int] = []
        self.inversion_counts: Counter[int] = Counter()
        self._mirror: list[int] = []
        self._task_at: dict[int, int] = {}

    def insert(self, task: int, priority: int) -> None:
        self.inner.insert(task, priority)
        insort(self._mirror, priority)
        self._task_at[priority] = task
        self.inversion_counts.setdefault(task, 0)

    def approx_get_min(self) -> tuple[int, int] | None:
        got = self.inner.approx_get_min()
        if got is None:
            return None
        task, priority = got
        mirror = self._mirror
        idx = bisect_left(mirror, priority)
        self.rank_log.append(idx + 1)
        task_at = self._task_at
        for p in mirror[:idx]:
            self.inversion_counts[task_at[p]] += 1
        mirror.pop(idx)
        del task_at[priority]
        return got

    def empty(self) -> bool:
        return self.inner.empty()

    def __len__(self) -> int:
        return len(self._mirror)


def exact_scheduler() -> ExactScheduler:
    return ExactScheduler()


def topk_uniform_scheduler(k: int, seed: int = 0) -> TopKUniformScheduler:
    return TopKUniformScheduler(k, seed)


def multiqueue_scheduler(c: int, seed: int = 0) -> MultiQueueScheduler:
    return MultiQueueScheduler(c, seed)


def rank_histogram(instrumented: InstrumentedScheduler) -> Counter[int]:
    """Empirical distribution of deletion ranks."""
    return Counter(instrumented.rank_log)


def inversion_histogram(instrumented: InstrumentedScheduler) -> Counter[int]:
    """Distribution of total inversions suffered, over all tasks seen."""
    return Counter(instrumented.inversion_counts.values())
