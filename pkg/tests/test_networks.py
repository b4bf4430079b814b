from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guiltsim.networks import (
    BaSpec,
    build_complete,
    build_lattice,
    build_scale_free,
    degree_summary,
    load_edgelist,
    save_edgelist,
)


def shortest_cycle_through(net, node):
    """BFS-based girth restricted to cycles through `node`."""
    best = None
    parent = {node: -1}
    dist = {node: 0}
    queue = deque([node])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            v = int(v)
            if v not in dist:
                dist[v] = dist[u] + 1
                parent[v] = u
                queue.append(v)
            elif parent[u] != v:
                length = dist[u] + dist[v] + 1
                if best is None or length < best:
                    best = length
    return best


class TestLattice:
    def test_paper_scale_lattice(self):
        net = build_lattice(30)
        net.validate()
        assert net.n == 900
        assert np.all(net.degrees == 4)
        assert net.edge_count == 1800

    def test_smallest_torus_neighborhood(self):
        net = build_lattice(3)
        assert sorted(net.neighbors(0).tolist()) == [1, 2, 3, 6]

    def test_rejects_too_small_side(self):
        with pytest.raises(ValueError, match="side"):
            build_lattice(2)

    @pytest.mark.parametrize("side", [3, 4, 7])
    def test_vertex_transitive_degree_histogram(self, side):
        summary = degree_summary(build_lattice(side))
        assert summary.histogram == {4: side * side}
        assert summary.min == summary.max == 4

    @pytest.mark.parametrize("side", [4, 5, 6])
    def test_girth_is_four(self, side):
        # side 3 wraps into 3-cycles; from side 4 on, plaquettes dominate
        net = build_lattice(side)
        for node in (0, side + 1, net.n - 1):
            assert shortest_cycle_through(net, node) == 4

    @pytest.mark.parametrize("side", [4, 6])
    def test_even_side_is_bipartite(self, side):
        net = build_lattice(side)
        color = (np.arange(net.n) // side + np.arange(net.n) % side) % 2
        assert np.all(color[net.edge_src] != color[net.indices])


class TestComplete:
    def test_small_graphs(self):
        assert build_complete(4).edge_count == 6
        assert build_complete(2).edge_count == 1

    def test_degrees(self):
        net = build_complete(100)
        net.validate()
        assert np.all(net.degrees == 99)
        assert degree_summary(net).mean == 99

    def test_rejects_singleton(self):
        with pytest.raises(ValueError):
            build_complete(1)


class TestScaleFree:
    def test_average_connectivity_near_two_m(self):
        net = build_scale_free(BaSpec(n=1000, m=2, seed=0))
        net.validate()
        assert 3.9 <= degree_summary(net).mean <= 4.0

    def test_deterministic_given_seed(self):
        a = build_scale_free(BaSpec(n=300, m=2, seed=99))
        b = build_scale_free(BaSpec(n=300, m=2, seed=99))
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.indptr, b.indptr)

    def test_different_seeds_differ(self):
        a = build_scale_free(BaSpec(n=300, m=2, seed=0))
        b = build_scale_free(BaSpec(n=300, m=2, seed=1))
        assert not np.array_equal(a.indices, b.indices)

    def test_hubs_emerge(self):
        for seed in range(20):
            net = build_scale_free(BaSpec(n=1000, m=2, seed=seed))
            assert degree_summary(net).max > 30

    def test_heavy_tail_and_minimum_degree(self):
        net = build_scale_free(BaSpec(n=1000, m=2, seed=3))
        deg = net.degrees
        assert deg.min() >= 2
        assert np.mean(deg >= 10) > 0

    def test_default_initial_clique(self):
        assert BaSpec(n=100, m=3, seed=0).initial_clique == 4
        assert BaSpec(n=100, m=3, m0=6, seed=0).initial_clique == 6

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="m0"):
            BaSpec(n=100, m=3, m0=2)
        with pytest.raises(ValueError, match="N"):
            BaSpec(n=3, m=2)
        with pytest.raises(ValueError, match="m must"):
            BaSpec(n=100, m=0)

    @settings(max_examples=20, deadline=None)
    @given(
        n=st.integers(10, 200),
        m=st.integers(1, 5),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_structural_invariants(self, n, m, seed):
        net = build_scale_free(BaSpec(n=n, m=m, seed=seed))
        net.validate()  # symmetry, no self-loops/duplicates, connected
        assert net.degrees.min() >= m


class TestEdgeList:
    def test_round_trip(self, tmp_path):
        net = build_scale_free(BaSpec(n=120, m=2, seed=11))
        path = tmp_path / "edges.txt"
        save_edgelist(net, path)
        loaded = load_edgelist(path)
        assert loaded.n == net.n
        assert np.array_equal(loaded.indptr, net.indptr)
        assert np.array_equal(loaded.indices, net.indices)

    def test_file_format(self, tmp_path):
        net = build_lattice(3)
        path = tmp_path / "edges.txt"
        save_edgelist(net, path)
        lines = path.read_text().splitlines()
        assert len(lines) == net.edge_count
        pairs = [tuple(map(int, ln.split())) for ln in lines]
        assert pairs == sorted(pairs)
        assert all(u < v for u, v in pairs)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "edges.txt"
        path.write_text("")
        with pytest.raises(ValueError, match="no edges"):
            load_edgelist(path)
