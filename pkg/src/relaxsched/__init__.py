"""Deterministic execution of iterative greedy algorithms through
relaxed priority schedulers, with instrumentation for the cost of
relaxation (failed deletes, deletion ranks, priority inversions)."""

from .engine import (ExecutionStats, ProblemHooks, SchedulerContractError,
                     run_exact, run_relaxed)
from .graphs import (DependencyGraph, EdgeListError, Permutation,
                     complete_graph, gen_gnm, gen_gnp, line_graph,
                     load_edge_list, path_graph, predecessors,
                     random_permutation, save_edge_list, successors)
from .harness import build_problem, make_scheduler, output_checksum
from .parallel import parallel_run
from .problems import (ColoringHooks, KnuthShuffleHooks, ListContractionHooks,
                       MatchingHooks, MISHooks, coloring_hooks,
                       compute_hot_edges, fisher_yates, greedy_mis_reference,
                       knuth_shuffle_hooks, list_contraction_hooks,
                       matching_hooks, mis_hooks, random_swap_targets,
                       shuffle_conflict_graph)
from .schedulers import (ExactScheduler, InstrumentedScheduler,
                         MultiQueueScheduler, Scheduler, TopKUniformScheduler,
                         exact_scheduler, inversion_histogram,
                         multiqueue_scheduler, rank_histogram,
                         topk_uniform_scheduler)
from .seeds import split_seed

__version__ = "0.1.0"
