"""Command-line experiment harness.

Three subcommands:

* ``gen``        -- generate a graph and write it as an edge-list file
* ``run``        -- sweep a problem/scheduler grid, emit a CSV report
* ``acceptance`` -- run the full acceptance suite, one line per criterion

CSV schema (one row per trial and relaxation parameter, then one mean
row per parameter): seed, n, m, k_or_queues, problem, scheduler,
total_iterations, failed_deletes, fast_discards, wall_ms,
output_checksum.  n and m describe the dependency structure the engine
ran over (for matching that is the line graph, for shuffle the conflict
graph).  Reruns with one seed are byte-identical apart from wall_ms.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from . import acceptance
from .engine import SchedulerContractError, run_relaxed
from .graphs import (DependencyGraph, complete_graph, gen_gnm, gen_gnp,
                     load_edge_list, save_edge_list)
from .harness import PROBLEMS, build_problem, make_scheduler, output_checksum
from .parallel import parallel_run
from .seeds import split_seed

CSV_COLUMNS = ("seed", "n", "m", "k_or_queues", "problem", "scheduler",
               "total_iterations", "failed_deletes", "fast_discards",
               "wall_ms", "output_checksum")


@dataclass
class ExperimentConfig:
    problem: str
    scheduler: str
    params: list[int]  # k sweep for topk, queue sweep for multiqueue, [1] for exact
    source: tuple
    seed: int
    trials: int
    workers: int

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if any(p < 1 for p in self.params):
            raise ValueError("relaxation parameters must be >= 1")
        if self.workers > 1 and self.scheduler != "multiqueue":
            raise ValueError("multi-worker runs require the multiqueue scheduler")
        kind = self.source[0]
        if self.problem in ("listcontract", "shuffle"):
            if kind != "size":
                raise ValueError(f"{self.problem} takes --list/--shuffle N, not a graph source")
        elif kind == "size":
            raise ValueError(f"{self.problem} needs a graph source (--gnm/--gnp/--clique/--graph)")


def parse_sweep(text: str) -> list[int]:
    """Parse a relaxation-parameter sweep: '8', '4,8,16', or a doubling
    range '4..64'."""
    if ".." in text:
        lo, hi = (int(part) for part in text.split("..", 1))
        if lo < 1 or hi < lo:
            raise ValueError(f"bad sweep range {text!r}")
        values = []
        v = lo
        while v <= hi:
            values.append(v)
            v *= 2
        return values
    return [int(part) for part in text.split(",")]


def _add_source_flags(parser: argparse.ArgumentParser, include_sizes: bool) -> None:
    parser.add_argument("--gnm", nargs=2, type=int, metavar=("N", "M"),
                        help="random graph with exactly M edges")
    parser.add_argument("--gnp", nargs=2, metavar=("N", "P"),
                        help="random graph, each pair present with probability P")
    parser.add_argument("--clique", type=int, metavar="N", help="complete graph")
    parser.add_argument("--graph", metavar="PATH", help="edge-list file to load")
    if include_sizes:
        parser.add_argument("--list", dest="list_n", type=int, metavar="N",
                            help="chain of N nodes (listcontract)")
        parser.add_argument("--shuffle", dest="shuffle_n", type=int, metavar="N",
                            help="shuffle of N items (shuffle)")


def _resolve_source(args, include_sizes: bool) -> tuple:
    picks = []
    if args.gnm is not None:
        picks.append(("gnm", args.gnm[0], args.gnm[1]))
    if args.gnp is not None:
        picks.append(("gnp", int(args.gnp[0]), float(args.gnp[1])))
    if args.clique is not None:
        picks.append(("clique", args.clique))
    if args.graph is not None:
        picks.append(("file", args.graph))
    if include_sizes:
        if getattr(args, "list_n", None) is not None:
            picks.append(("size", args.list_n))
        if getattr(args, "shuffle_n", None) is not None:
            picks.append(("size", args.shuffle_n))
    if len(picks) != 1:
        raise ValueError("exactly one graph source must be given")
    return picks[0]


def _materialize_graph(source: tuple, seed: int) -> DependencyGraph:
    kind = source[0]
    if kind == "gnm":
        return gen_gnm(source[1], source[2], seed)
    if kind == "gnp":
        return gen_gnp(source[1], source[2], seed)
    if kind == "clique":
        return complete_graph(source[1])
    if kind == "file":
        return load_edge_list(source[1])
    raise ValueError(f"source {kind!r} is not a graph")


def cmd_gen(args) -> int:
    source = _resolve_source(args, include_sizes=False)
    g = _materialize_graph(source, args.seed)
    save_edge_list(g, args.out)
    print(f"{g.n} {g.m}")
    return 0


def cmd_run(args) -> int:
    if args.scheduler == "exact":
        params = [1]
    elif args.scheduler == "topk":
        if args.k is None:
            raise ValueError("--k is required with the topk scheduler")
        params = parse_sweep(args.k)
    elif args.scheduler == "multiqueue":
        if args.queues is None:
            raise ValueError("--queues is required with the multiqueue scheduler")
        params = parse_sweep(args.queues)
    else:
        raise ValueError(f"unknown scheduler {args.scheduler!r}")

    config = ExperimentConfig(
        problem=args.problem, scheduler=args.scheduler, params=params,
        source=_resolve_source(args, include_sizes=True),
        seed=args.seed, trials=args.trials, workers=args.workers)
    config.validate()

    rows, failed = _run_experiment(config)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 1 if failed else 0


def _run_experiment(config: ExperimentConfig):
    rows = []
    failed = False
    file_graph = None
    if config.source[0] == "file":
        file_graph = load_edge_list(config.source[1])
    sums: dict[int, list[float]] = {p: [0.0, 0.0, 0.0, 0.0] for p in config.params}

    for trial in range(config.trials):
        trial_seed = split_seed(config.seed, "trial", trial)
        if config.source[0] == "size":
            setup = build_problem(config.problem, trial_seed, size=config.source[1])
        else:
            g = file_graph if file_graph is not None else _materialize_graph(
                config.source, split_seed(trial_seed, "graph"))
            setup = build_problem(config.problem, trial_seed, graph=g)
        for param in config.params:
            sched_seed = split_seed(trial_seed, "sched", param)
            start = time.perf_counter()
            try:
                if config.workers > 1:
                    output, stats = parallel_run(
                        setup.graph, setup.perm, setup.make_hooks(),
                        workers=config.workers, queues=param, seed=sched_seed)
                else:
                    scheduler = make_scheduler(config.scheduler, param, sched_seed)
                    output, stats = run_relaxed(
                        setup.graph, setup.perm, setup.make_hooks(), scheduler)
            except SchedulerContractError:
                failed = True
                rows.append([trial_seed, setup.graph.n, setup.graph.m, param,
                             config.problem, config.scheduler, "", "", "", "", "FAILED"])
                continue
            wall_ms = (time.perf_counter() - start) * 1000.0
            rows.append([trial_seed, setup.graph.n, setup.graph.m, param,
                         config.problem, config.scheduler, stats.total_iterations,
                         stats.failed_deletes, stats.fast_discards,
                         f"{wall_ms:.3f}", output_checksum(output)])
            acc = sums[param]
            acc[0] += stats.total_iterations
            acc[1] += stats.failed_deletes
            acc[2] += stats.fast_discards
            acc[3] += wall_ms

    for param in config.params:
        acc = sums[param]
        t = config.trials
        rows.append(["mean", "", "", param, config.problem, config.scheduler,
                     f"{acc[0] / t:.2f}", f"{acc[1] / t:.2f}", f"{acc[2] / t:.2f}",
                     f"{acc[3] / t:.3f}", ""])
    return rows, failed


def cmd_acceptance(args) -> int:
    return 0 if acceptance.run_all() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxsched",
        description="Deterministic greedy algorithms over relaxed priority schedulers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a graph file")
    _add_source_flags(p_gen, include_sizes=False)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="edge-list output path")
    p_gen.set_defaults(func=cmd_gen)

    p_run = sub.add_parser("run", help="run an experiment sweep")
    p_run.add_argument("--problem", required=True, choices=PROBLEMS)
    p_run.add_argument("--scheduler", required=True,
                       choices=("exact", "topk", "multiqueue"))
    p_run.add_argument("--k", help="topk relaxation: '8', '4,8', or '4..64'")
    p_run.add_argument("--queues", help="multiqueue count, same sweep syntax")
    _add_source_flags(p_run, include_sizes=True)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--trials", type=int, default=20)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--out", help="CSV output path (default: stdout)")
    p_run.set_defaults(func=cmd_run)

    p_acc = sub.add_parser("acceptance", help="run the acceptance suite")
    p_acc.set_defaults(func=cmd_acceptance)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
