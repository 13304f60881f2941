"""Release-gating acceptance checks.

Eight checks, each printing one line with its measurement, tolerance,
and verdict.  All randomness is pinned to fixed seeds, so the suite is
deterministic run to run.

1. determinism          -- relaxed output equals exact output, always
2. mis-overhead         -- MIS failed deletes near reference means, rising in k
3. size-independence    -- MIS overhead unaffected by a 10x larger input
4. sparse-budget        -- chain/shuffle overhead inside a poly(k) budget, size-free
5. clique-coloring      -- dense coloring iterations grow linearly in k
6. scheduler-contract   -- rank strictness, top-rank frequency, exponential tails
7. hot-edges            -- exactly one hot edge per vertex outside the MIS
8. parallel-mis         -- multi-worker runs reproduce the sequential MIS
"""

from __future__ import annotations

import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .engine import run_exact, run_relaxed
from .graphs import complete_graph, gen_gnm, gen_gnp, random_permutation
from .harness import PROBLEMS, build_problem, output_checksum
from .parallel import parallel_run
from .problems import MISHooks, ColoringHooks, compute_hot_edges, greedy_mis_reference
from .schedulers import (ExactScheduler, InstrumentedScheduler,
                         MultiQueueScheduler, TopKUniformScheduler)
from .seeds import split_seed

MASTER_SEED = 0x5EED_ACCE

# Reference mean failed-delete counts for MIS on gnm(1000, 10000),
# indexed by relaxation factor.  Measured with a MultiQueue-relaxed
# configuration over a handful of runs, hence the loose 4x band.
MIS_OVERHEAD_REFERENCE = {4: 12.8, 8: 56.8, 16: 148.8, 32: 308.6, 64: 583.0}


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"[{verdict}] {self.name}: {self.detail} [{self.elapsed:.1f}s]"
        for note in self.notes:
            text += f"\n    note: {note}"
        return text


def default_determinism_schedulers():
    """The scheduler grid the determinism check sweeps: exact, strict
    top-k for k in {2, 8, 32}, and MultiQueues with 4 and 16 queues."""
    specs = [("exact", lambda seed: ExactScheduler())]
    for k in (2, 8, 32):
        specs.append((f"topk{k}", lambda seed, k=k: TopKUniformScheduler(k, seed)))
    for c in (4, 16):
        specs.append((f"mq{c}", lambda seed, c=c: MultiQueueScheduler(c, seed)))
    return specs


def check_determinism(instances: int = 200, max_n: int = 200,
                      schedulers=None, seeds_per_scheduler: int = 3) -> CriterionResult:
    """Every relaxed run must reproduce the exact run's output checksum,
    for all five problems, across the scheduler grid and seeds."""
    t0 = time.perf_counter()
    if schedulers is None:
        schedulers = default_determinism_schedulers()
    matched = total = 0
    mismatches: list[str] = []
    for problem in PROBLEMS:
        for i in range(instances):
            iseed = split_seed(MASTER_SEED, "determinism", problem, i)
            rng = np.random.default_rng(iseed)
            n = int(rng.integers(1, max_n + 1))
            if problem in ("mis", "matching", "coloring"):
                m = int(rng.integers(0, min(3 * n, n * (n - 1) // 2) + 1))
                g = gen_gnm(n, m, split_seed(iseed, "graph"))
                setup = build_problem(problem, iseed, graph=g)
            else:
                setup = build_problem(problem, iseed, size=n)
            expected = output_checksum(
                run_exact(setup.graph, setup.perm, setup.make_hooks())[0])
            for label, factory in schedulers:
                for s in range(seeds_per_scheduler):
                    sched = factory(split_seed(iseed, "sched", label, s))
                    out, _ = run_relaxed(setup.graph, setup.perm, setup.make_hooks(), sched)
                    total += 1
                    if output_checksum(out) == expected:
                        matched += 1
                    elif len(mismatches) < 5:
                        mismatches.append(f"{problem}[{i}] {label} seed {s}")
    detail = f"{matched}/{total} relaxed runs matched the exact output (required: all)"
    if mismatches:
        detail += f"; first mismatches: {', '.join(mismatches)}"
    return CriterionResult("determinism", matched == total, detail,
                           time.perf_counter() - t0)


def check_mis_overhead(trials: int = 50) -> CriterionResult:
    """Mean MIS failed deletes on gnm(1000, 10000) under strict top-k must
    sit within 4x of the reference means and rise strictly with k."""
    t0 = time.perf_counter()
    means: dict[int, float] = {}
    for k in sorted(MIS_OVERHEAD_REFERENCE):
        extras = []
        for t in range(trials):
            tseed = split_seed(MASTER_SEED, "overhead", k, t)
            g = gen_gnm(1000, 10000, split_seed(tseed, "graph"))
            perm = random_permutation(1000, split_seed(tseed, "perm"))
            sched = TopKUniformScheduler(k, split_seed(tseed, "sched"))
            _, stats = run_relaxed(g, perm, MISHooks(g, perm), sched)
            extras.append(stats.extra_iterations)
        means[k] = sum(extras) / trials
    in_band = all(ref / 4 <= means[k] <= ref * 4
                  for k, ref in MIS_OVERHEAD_REFERENCE.items())
    ks = sorted(means)
    increasing = all(means[a] < means[b] for a, b in zip(ks, ks[1:]))
    shown = ", ".join(
        f"k={k}: {means[k]:.1f} (band [{MIS_OVERHEAD_REFERENCE[k] / 4:.1f}, "
        f"{MIS_OVERHEAD_REFERENCE[k] * 4:.1f}])" for k in ks)
    detail = (f"mean extra iterations over {trials} trials: {shown}; "
              f"within 4x of reference: {in_band}; strictly increasing: {increasing}")
    return CriterionResult("mis-overhead", in_band and increasing, detail,
                           time.perf_counter() - t0)


def check_size_independence(trials: int = 20) -> CriterionResult:
    """For fixed k, mean MIS overhead on gnm(1000, 10000) and
    gnm(10000, 100000) must agree within a factor of 2."""
    t0 = time.perf_counter()
    sizes = ((1000, 10000), (10000, 100000))
    parts = []
    passed = True
    for k in (8, 32):
        means = []
        for n, m in sizes:
            extras = []
            for t in range(trials):
                tseed = split_seed(MASTER_SEED, "sizefree", k, n, t)
                g = gen_gnm(n, m, split_seed(tseed, "graph"))
                perm = random_permutation(n, split_seed(tseed, "perm"))
                sched = TopKUniformScheduler(k, split_seed(tseed, "sched"))
                _, stats = run_relaxed(g, perm, MISHooks(g, perm), sched)
                extras.append(stats.extra_iterations)
            means.append(sum(extras) / trials)
        ratio = max(means) / max(min(means), 1e-9)
        passed = passed and ratio <= 2.0
        parts.append(f"k={k}: {means[0]:.1f} vs {means[1]:.1f} (ratio {ratio:.2f})")
    detail = f"mean extra iterations small vs 10x input, {'; '.join(parts)}; required ratio <= 2"
    return CriterionResult("size-independence", passed, detail,
                           time.perf_counter() - t0)


def check_sparse_budget(trials: int = 30, k: int = 16) -> CriterionResult:
    """List contraction and shuffle at k=16: overhead at n=10000 must stay
    under 50*k^2 and agree within 2x with n=1000."""
    t0 = time.perf_counter()
    budget = 50 * k * k
    parts = []
    passed = True
    for problem in ("listcontract", "shuffle"):
        means: dict[int, float] = {}
        for n in (1000, 10000):
            extras = []
            for t in range(trials):
                tseed = split_seed(MASTER_SEED, "sparse", problem, n, t)
                setup = build_problem(problem, tseed, size=n)
                sched = TopKUniformScheduler(k, split_seed(tseed, "sched"))
                _, stats = run_relaxed(setup.graph, setup.perm, setup.make_hooks(), sched)
                extras.append(stats.extra_iterations)
            means[n] = sum(extras) / trials
        ratio = max(means.values()) / max(min(means.values()), 1e-9)
        ok = means[10000] <= budget and ratio <= 2.0
        passed = passed and ok
        parts.append(f"{problem}: n=1000 {means[1000]:.1f}, n=10000 {means[10000]:.1f} "
                     f"(budget {budget}, ratio {ratio:.2f})")
    detail = f"{'; '.join(parts)}; required mean <= budget and ratio <= 2"
    return CriterionResult("sparse-budget", passed, detail, time.perf_counter() - t0)


def check_clique_coloring(trials: int = 3, n: int = 500) -> CriterionResult:
    """Coloring a clique forces one processable vertex at a time, so
    iterations/n must grow linearly in k: within 2x of the k=2 slope."""
    t0 = time.perf_counter()
    g = complete_graph(n)
    per_k: dict[int, float] = {}
    for k in (2, 8, 32):
        totals = []
        for t in range(trials):
            tseed = split_seed(MASTER_SEED, "clique", k, t)
            perm = random_permutation(n, split_seed(tseed, "perm"))
            sched = TopKUniformScheduler(k, split_seed(tseed, "sched"))
            _, stats = run_relaxed(g, perm, ColoringHooks(g, perm), sched)
            totals.append(stats.total_iterations)
        per_k[k] = sum(totals) / trials / n
    slope = per_k[2] / 2
    passed = True
    parts = [f"k=2: {per_k[2]:.2f} (slope {slope:.3f})"]
    for k in (8, 32):
        ratio = per_k[k] / (slope * k)
        passed = passed and 0.5 <= ratio <= 2.0
        parts.append(f"k={k}: {per_k[k]:.2f} ({ratio:.2f}x of linear)")
    detail = f"iterations/n on K{n}: {', '.join(parts)}; required within 2x of linear fit"
    return CriterionResult("clique-coloring", passed, detail, time.perf_counter() - t0)


def _instrumented_drain(scheduler, n: int, seed: int) -> InstrumentedScheduler:
    instr = InstrumentedScheduler(scheduler)
    labels = np.random.default_rng(seed).permutation(n).tolist()
    for task, priority in enumerate(labels):
        instr.insert(task, priority)
    while instr.approx_get_min() is not None:
        pass
    return instr


def check_scheduler_contract(ops: int = 100_000) -> CriterionResult:
    """(a) strict top-k never returns rank > k; (b) the true minimum is
    returned with frequency >= 1/k - 3 sigma; (c) MultiQueue rank tails
    decay exponentially with mean rank <= 4c."""
    t0 = time.perf_counter()
    parts = []
    passed = True
    for k in (2, 8, 32):
        seed = split_seed(MASTER_SEED, "contract", "topk", k)
        instr = _instrumented_drain(TopKUniformScheduler(k, split_seed(seed, "s")),
                                    ops, split_seed(seed, "p"))
        ranks = instr.rank_log
        worst = max(ranks)
        frac1 = ranks.count(1) / len(ranks)
        p = 1.0 / k
        floor = p - 3 * math.sqrt(p * (1 - p) / len(ranks))
        ok = worst <= k and frac1 >= floor
        passed = passed and ok
        parts.append(f"topk{k}: max rank {worst} (<= {k}), "
                     f"rank-1 freq {frac1:.4f} (>= {floor:.4f})")

    c = 16
    seed = split_seed(MASTER_SEED, "contract", "mq", c)
    instr = _instrumented_drain(MultiQueueScheduler(c, split_seed(seed, "s")),
                                ops, split_seed(seed, "p"))
    ranks = np.asarray(instr.rank_log)
    mean_rank = float(ranks.mean())
    counts = np.bincount(ranks, minlength=ranks.max() + 2)
    survival = counts[::-1].cumsum()[::-1] / len(ranks)  # survival[l] = P[rank >= l]
    monotone = bool((np.diff(survival) <= 1e-12).all())
    ls = np.arange(2, len(survival))
    bound = np.exp(-(ls - 1) / (4.0 * c))
    tail_ok = bool((survival[2:] <= bound + 1e-12).all())
    mq_ok = mean_rank <= 4 * c and monotone and tail_ok
    passed = passed and mq_ok
    parts.append(f"mq{c}: mean rank {mean_rank:.2f} (<= {4 * c}), survival monotone "
                 f"{monotone}, under exp(-(l-1)/{4 * c}) for l>=2: {tail_ok}")
    detail = f"{ops}-op drains; {'; '.join(parts)}"
    return CriterionResult("scheduler-contract", passed, detail,
                           time.perf_counter() - t0)


def check_hot_edges(instances: int = 100) -> CriterionResult:
    """Hot-edge count must equal n - |MIS| exactly on every instance."""
    t0 = time.perf_counter()
    bad = 0
    for i in range(instances):
        iseed = split_seed(MASTER_SEED, "hot", i)
        rng = np.random.default_rng(iseed)
        n = int(rng.integers(10, 151))
        p = float(rng.uniform(0.02, 0.3))
        g = gen_gnp(n, p, split_seed(iseed, "graph"))
        perm = random_permutation(n, split_seed(iseed, "perm"))
        hot = compute_hot_edges(g, perm)
        mis = greedy_mis_reference(g, perm)
        if len(hot) != n - len(mis) or len(hot) >= n:
            bad += 1
    detail = (f"{instances - bad}/{instances} instances had exactly one hot edge "
              f"per non-member (count = n - |MIS|, required always)")
    return CriterionResult("hot-edges", bad == 0, detail, time.perf_counter() - t0)


def check_parallel_mis(seeds: int = 5, worker_counts=(1, 2, 4, 8),
                       n: int = 100_000, m: int = 1_000_000) -> CriterionResult:
    """Every multi-worker MIS run must reproduce the sequential greedy
    output; on a >= 4-core host, 4 workers must not be slower than 1."""
    t0 = time.perf_counter()
    walls: dict[int, list[float]] = {w: [] for w in worker_counts}
    correct = total = 0
    notes: list[str] = []
    for s in range(seeds):
        sseed = split_seed(MASTER_SEED, "parallel", s)
        g = gen_gnm(n, m, split_seed(sseed, "graph"))
        perm = random_permutation(n, split_seed(sseed, "perm"))
        ref = greedy_mis_reference(g, perm)
        for w in worker_counts:
            hooks = MISHooks(g, perm)
            t1 = time.perf_counter()
            out, stats = parallel_run(g, perm, hooks, workers=w, queues=4 * w,
                                      seed=split_seed(sseed, "sched", w))
            walls[w].append(time.perf_counter() - t1)
            total += 1
            balanced = (stats.total_iterations
                        == stats.processed + stats.failed_deletes + stats.fast_discards)
            if out == ref and balanced:
                correct += 1
    passed = correct == total
    detail = f"{correct}/{total} runs matched the sequential greedy output (required: all)"
    cores = os.cpu_count() or 1
    if cores >= 4 and 1 in walls and 4 in walls:
        w1 = sum(walls[1]) / len(walls[1])
        w4 = sum(walls[4]) / len(walls[4])
        ok = w4 <= w1
        passed = passed and ok
        detail += f"; wall 4 workers {w4:.2f}s <= 1 worker {w1:.2f}s: {ok}"
    else:
        notes.append(f"speedup check skipped: host has {cores} cores (< 4)")
    return CriterionResult("parallel-mis", passed, detail,
                           time.perf_counter() - t0, notes)


CRITERIA = (
    check_determinism,
    check_mis_overhead,
    check_size_independence,
    check_sparse_budget,
    check_clique_coloring,
    check_scheduler_contract,
    check_hot_edges,
    check_parallel_mis,
)


def run_all(stream=None) -> bool:
    """Run every criterion, print one line each, return overall verdict."""
    stream = stream or sys.stdout
    results = []
    for check in CRITERIA:
        result = check()
        print(result.line(), file=stream, flush=True)
        results.append(result)
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed",
          file=stream, flush=True)
    return ok
