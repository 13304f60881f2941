import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relaxsched.graphs import (DependencyGraph, EdgeListError, Permutation,
                               complete_graph, gen_gnm, gen_gnp, line_graph,
                               load_edge_list, path_graph, predecessors,
                               random_permutation, save_edge_list, successors)
from relaxsched.seeds import split_seed


def check_invariants(g):
    offsets = g.offsets.tolist()
    adj = g.adj.tolist()
    assert offsets[0] == 0 and offsets[-1] == len(adj)
    assert len(adj) == 2 * g.m
    pairs = set()
    for u in range(g.n):
        row = adj[offsets[u]:offsets[u + 1]]
        assert row == sorted(row)
        assert len(set(row)) == len(row)
        assert u not in row
        for v in row:
            pairs.add((u, v))
    for u, v in pairs:
        assert (v, u) in pairs


class TestGenGnm:
    def test_no_edges(self):
        g = gen_gnm(4, 0, seed=11)
        assert g.m == 0 and all(g.degree(v) == 0 for v in range(4))

    def test_single_edge_is_unique_graph(self):
        g = gen_gnm(2, 1, seed=5)
        assert list(g.edges()) == [(0, 1)]

    def test_invariants_at_scale(self):
        g = gen_gnm(1000, 10000, seed=7)
        assert g.m == 10000
        check_invariants(g)

    def test_deterministic_per_seed(self):
        assert gen_gnm(50, 120, seed=3) == gen_gnm(50, 120, seed=3)
        assert gen_gnm(50, 120, seed=3) != gen_gnm(50, 120, seed=4)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            gen_gnm(4, 7, seed=0)  # max is 6
        with pytest.raises(ValueError):
            gen_gnm(0, 0, seed=0)


class TestGenGnp:
    def test_p_zero_empty(self):
        assert gen_gnp(5, 0.0, seed=2).m == 0

    def test_p_one_complete(self):
        g = gen_gnp(5, 1.0, seed=2)
        assert g.m == 10
        assert g == complete_graph(5)

    def test_edge_count_concentrates(self):
        # binomial over 499500 pairs at p=0.02: mean 9990, sigma ~ 98.9
        g = gen_gnp(1000, 0.02, seed=3)
        mean = 0.02 * (1000 * 999 // 2)
        sigma = math.sqrt(mean * 0.98)
        assert abs(g.m - mean) <= 4 * sigma
        check_invariants(g)

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            gen_gnp(5, -0.1, seed=0)
        with pytest.raises(ValueError):
            gen_gnp(5, 1.5, seed=0)


class TestEdgeListIO:
    def test_parse_path_graph(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("3 2\n0 1\n1 2\n")
        g = load_edge_list(path)
        assert g.n == 3 and list(g.edges()) == [(0, 1), (1, 2)]

    def test_round_trip(self, tmp_path):
        g = gen_gnm(80, 200, seed=9)
        path = tmp_path / "g.txt"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    def test_self_loop_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 1\n0 0\n")
        with pytest.raises(EdgeListError, match="line 2.*self-loop"):
            load_edge_list(path)

    @pytest.mark.parametrize("content,pattern", [
        ("nonsense\n", "line 1"),
        ("3 2\n0 1\n", "line 1"),               # header count mismatch
        ("3 2\n0 1\n0 5\n", "line 3"),          # vertex out of range
        ("3 2\n0 1\n1 0\n", "line 3"),          # violates u < v
        ("3 2\n0 1\n0 1\n", "line 3.*duplicate"),
        ("3 1\nx y\n", "line 2"),
    ])
    def test_malformed_files(self, tmp_path, content, pattern):
        path = tmp_path / "bad.txt"
        path.write_text(content)
        with pytest.raises(EdgeListError, match=pattern):
            load_edge_list(path)


class TestLineGraph:
    def test_path(self):
        lg, emap = line_graph(path_graph(3))
        assert emap == [(0, 1), (1, 2)]
        assert lg.n == 2 and list(lg.edges()) == [(0, 1)]

    def test_triangle_maps_to_triangle(self):
        lg, _ = line_graph(complete_graph(3))
        assert lg.n == 3 and lg.m == 3

    def test_star_maps_to_triangle(self):
        # K_{1,3}: edges (0,1) (0,2) (0,3) pairwise share vertex 0
        star = DependencyGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        lg, emap = line_graph(star)
        assert emap == [(0, 1), (0, 2), (0, 3)]
        assert lg.n == 3 and lg.m == 3

    def test_counts_match_degree_formula(self):
        g = gen_gnm(40, 100, seed=21)
        lg, _ = line_graph(g)
        assert lg.n == g.m
        expected = sum(g.degree(v) * (g.degree(v) - 1) // 2 for v in range(g.n))
        assert lg.m == expected
        check_invariants(lg)


class TestPermutation:
    def test_singleton_identity(self):
        p = random_permutation(1, seed=0)
        assert p.labels.tolist() == [0]

    def test_bijection_and_inverse(self):
        p = random_permutation(100, seed=4)
        assert sorted(p.labels.tolist()) == list(range(100))
        for v in range(100):
            assert p.inverse[p.labels[v]] == v

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 2])

    def test_uniform_over_small_permutations(self):
        # 60000 draws over 3! outcomes: each cell 10000 +- 3*sqrt(60000*(1/6)(5/6))
        counts = {}
        for i in range(60000):
            key = tuple(random_permutation(3, split_seed(42, "perm", i)).labels.tolist())
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        sigma = math.sqrt(60000 * (1 / 6) * (5 / 6))
        for count in counts.values():
            assert abs(count - 10000) <= 3 * sigma


class TestOrientation:
    def test_isolated_vertex(self):
        g = gen_gnm(3, 0, seed=1)
        assert predecessors(g, Permutation.identity(3), 1) == []

    def test_single_edge(self):
        g = DependencyGraph.from_edges(2, [(0, 1)])
        perm = Permutation.identity(2)
        assert predecessors(g, perm, 1) == [0]
        assert predecessors(g, perm, 0) == []

    def test_complete_graph_last_label(self):
        g = complete_graph(4)
        assert predecessors(g, Permutation.identity(4), 3) == [0, 1, 2]

    def test_degree_splits(self):
        g = gen_gnm(60, 150, seed=13)
        perm = random_permutation(60, seed=14)
        for v in range(g.n):
            assert len(predecessors(g, perm, v)) + len(successors(g, perm, v)) == g.degree(v)

    def test_orientation_is_acyclic(self):
        # independent check: Kahn's algorithm consumes every vertex
        g = gen_gnm(80, 240, seed=15)
        perm = random_permutation(80, seed=16)
        indeg = [len(predecessors(g, perm, v)) for v in range(g.n)]
        ready = [v for v in range(g.n) if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for u in successors(g, perm, v):
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
        assert seen == g.n


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(0, 2 ** 32 - 1))
def test_generated_graphs_always_valid(n, seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, n * (n - 1) // 2 + 1))
    g = gen_gnm(n, m, seed)
    assert g.m == m
    check_invariants(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2 ** 32 - 1))
def test_edge_list_round_trip_property(tmp_path_factory, n, seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, n * (n - 1) // 2 + 1))
    g = gen_gnm(n, m, seed)
    path = tmp_path_factory.mktemp("io") / "g.txt"
    save_edge_list(g, path)
    assert load_edge_list(path) == g
