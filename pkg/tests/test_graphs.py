import numpy as np
import pytest

from graphset.errors import (
    EmptyGraphError,
    GenerationError,
    ParameterError,
    ShapeError,
)
from graphset.graphs import (
    Graph,
    GraphCollection,
    bfs_distances,
    bfs_layers,
    connected_components,
    generate_planted_partition,
    k_core,
    largest_component,
    sample_nodes,
)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def check_symmetry(g):
    for u in range(g.node_count):
        for v in g.neighbors(u):
            assert u in g.neighbors(v)
            assert u != v


class TestGraphConstruction:
    def test_dedup_and_reversed(self):
        g = Graph.from_edges(2, [(0, 1), (1, 0), (0, 1)])
        assert g.edge_count == 1
        assert list(g.neighbors(0)) == [1]

    def test_self_loop_rejected(self):
        with pytest.raises(ShapeError):
            Graph.from_edges(2, [(0, 0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ShapeError):
            Graph.from_edges(2, [(0, 2)])

    def test_duplicate_node_ids_rejected(self):
        with pytest.raises(ShapeError):
            Graph.from_edges(2, [(0, 1)], node_ids=[5, 5])

    def test_symmetry_invariant(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            n = 12
            pairs = rng.integers(0, n, size=(30, 2))
            pairs = pairs[pairs[:, 0] != pairs[:, 1]]
            g = Graph.from_edges(n, pairs)
            check_symmetry(g)

    def test_edges_listing_roundtrip(self):
        g = cycle(5)
        e = g.edges()
        assert len(e) == 5
        g2 = Graph.from_edges(5, e)
        assert np.array_equal(g2.indices, g.indices)

    def test_empty_graph(self):
        g = Graph.from_edges(0, [])
        assert g.node_count == 0
        assert g.edge_count == 0


class TestCollection:
    def test_graph_ids_reassigned(self):
        c = GraphCollection([cycle(3), cycle(4)])
        assert [g.graph_id for g in c] == [0, 1]

    def test_label_count_mismatch(self):
        with pytest.raises(ShapeError):
            GraphCollection([cycle(3)], labels=[0, 1])

    def test_len_and_indexing(self):
        c = GraphCollection([cycle(3), cycle(4)], labels=[0, 1])
        assert len(c) == 2
        assert c[1].node_count == 4


class TestBFS:
    def test_c6_layer_sizes(self):
        # hand count on the hexagon: 1, 2, 2, 1
        g = cycle(6)
        for v in range(6):
            layers = bfs_layers(g, v, 3)
            assert [len(s) for s in layers] == [1, 2, 2, 1]

    def test_k4_layer_sizes(self):
        g = complete(4)
        for v in range(4):
            assert [len(s) for s in bfs_layers(g, v, 3)] == [1, 3]

    def test_isolated_node(self):
        g = Graph.from_edges(1, [])
        assert bfs_layers(g, 0, 4) == [{0}]

    def test_invalid_node(self):
        with pytest.raises(IndexError):
            bfs_layers(cycle(3), 7, 2)

    def test_layers_partition_reachable_set(self):
        g = generate_planted_partition(40, [20, 20], 0.3, seed=1, degree=3)
        layers = bfs_layers(g, 0, 4)
        union = set()
        for s in layers:
            assert not (union & s)
            union |= s
        dist = bfs_distances(g, 0, 4)
        assert union == set(np.flatnonzero(dist >= 0).tolist())

    def test_max_depth_truncates(self):
        g = cycle(10)
        layers = bfs_layers(g, 0, 2)
        assert [len(s) for s in layers] == [1, 2, 2]


class TestComponents:
    def test_triangle_plus_edge(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        lc = largest_component(g)
        assert lc.node_count == 3
        assert lc.edge_count == 3
        assert set(lc.node_ids.tolist()) == {0, 1, 2}

    def test_connected_identity(self):
        g = cycle(5)
        lc = largest_component(g)
        assert lc.node_count == 5
        assert np.array_equal(lc.indices, g.indices)

    def test_tie_break_smallest_id(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        lc = largest_component(g)
        assert set(lc.node_ids.tolist()) == {0, 1, 2}
        # same graph with external ids reversed: tie goes to the ids 0,1,2 side
        g2 = Graph.from_edges(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            node_ids=[5, 4, 3, 2, 1, 0],
        )
        lc2 = largest_component(g2)
        assert set(lc2.node_ids.tolist()) == {0, 1, 2}

    def test_empty_graph_error(self):
        with pytest.raises(EmptyGraphError):
            largest_component(Graph.from_edges(0, []))

    def test_output_connected(self):
        g = generate_planted_partition(60, [30, 30], 0.0, seed=3, degree=4)
        lc = largest_component(g)
        assert len(connected_components(lc)) == 1


class TestKCore:
    def test_triangle_2core(self):
        g = complete(3)
        out = k_core(g, 2)
        assert out.node_count == 3

    def test_p3_2core_empty(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        out = k_core(g, 2)
        assert out.node_count == 0

    def test_k4_minus_edge_3core_empty(self):
        # K4 without (2,3): degrees 3,3,2,2. Peeling node 2 drops both
        # degree-3 nodes below 3, so everything unravels.
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        out = k_core(g, 3)
        assert out.node_count == 0

    def test_degrees_at_least_k(self):
        g = generate_planted_partition(60, [30, 30], 0.2, seed=9, degree=5)
        for k in (2, 3, 4):
            core = k_core(g, k)
            if core.node_count:
                assert core.degrees.min() >= k

    def test_k_below_one(self):
        with pytest.raises(ParameterError):
            k_core(cycle(3), 0)


class TestSampling:
    def test_rate_one_keeps_all(self):
        g = cycle(10)
        s = sample_nodes(g, 1.0, seed=0)
        assert np.array_equal(s.kept_nodes, np.arange(10))

    def test_half_rate_and_determinism(self):
        g = cycle(10)
        s1 = sample_nodes(g, 0.5, seed=42)
        s2 = sample_nodes(g, 0.5, seed=42)
        assert len(s1.kept_nodes) == 5
        assert np.array_equal(s1.kept_nodes, s2.kept_nodes)
        others = [sample_nodes(g, 0.5, seed=s).kept_nodes for s in range(43, 48)]
        assert any(not np.array_equal(s1.kept_nodes, o) for o in others)

    def test_floor_guard(self):
        g = cycle(3)
        s = sample_nodes(g, 0.1, seed=0)
        assert len(s.kept_nodes) == 1

    def test_sorted_and_in_range(self):
        g = cycle(20)
        s = sample_nodes(g, 0.4, seed=7)
        kept = s.kept_nodes
        assert np.array_equal(kept, np.sort(kept))
        assert len(np.unique(kept)) == len(kept)
        assert kept.min() >= 0 and kept.max() < 20

    def test_bad_rate(self):
        g = cycle(4)
        for rate in (0.0, -0.5, 1.5):
            with pytest.raises(ParameterError):
                sample_nodes(g, rate, seed=0)


class TestPlantedPartition:
    def test_xi_zero_intra_community_only(self):
        comms = [20, 20, 20]
        g = generate_planted_partition(60, comms, 0.0, seed=5, degree=4)
        membership = np.repeat(np.arange(3), comms)
        for u, v in g.edges():
            assert membership[u] == membership[v]

    def test_xi_one_crosses_communities(self):
        comms = [30, 30]
        g = generate_planted_partition(60, comms, 1.0, seed=5, degree=4)
        membership = np.repeat(np.arange(2), comms)
        cross = sum(1 for u, v in g.edges() if membership[u] != membership[v])
        # uniform endpoints: about half the edges should cross
        assert cross > 0.25 * g.edge_count

    def test_edge_count_near_target(self):
        g = generate_planted_partition(200, [20] * 10, 0.2, seed=11, degree=5)
        # n*degree/2 = 500 endpoints pairings, minus a few dropped collisions
        assert 430 <= g.edge_count <= 500

    def test_deterministic(self):
        a = generate_planted_partition(60, [30, 30], 0.3, seed=2, degree=4)
        b = generate_planted_partition(60, [30, 30], 0.3, seed=2, degree=4)
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.indptr, b.indptr)

    def test_simple_graph(self):
        g = generate_planted_partition(50, [25, 25], 0.5, seed=8, degree=6)
        check_symmetry(g)
        e = g.edges()
        keys = {(int(u), int(v)) for u, v in e}
        assert len(keys) == len(e)

    def test_infeasible_params(self):
        with pytest.raises(GenerationError):
            generate_planted_partition(10, [5, 6], 0.2, seed=0)
        with pytest.raises(GenerationError):
            generate_planted_partition(10, [5, 5], 1.5, seed=0)
        with pytest.raises(GenerationError):
            generate_planted_partition(10, [5, 5], 0.2, seed=0, degree=5)
