import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctqw.errors import GraphGenerationError
from ctqw.graphs import (
    Graph,
    NodePolicy,
    build_barabasi_albert,
    build_complete,
    build_cycle,
    build_erdos_renyi,
    build_star,
    build_watts_strogatz,
    closeness_centrality,
    is_connected,
    laplacian,
    select_node,
    shortest_path_lengths,
)


def assert_valid_graph(g: Graph):
    a = g.adjacency()
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert set(np.unique(a)) <= {0.0, 1.0}
    assert is_connected(g.n, g.adjacency_lists())


class TestDeterministicFamilies:
    def test_triangle_edges(self):
        g = build_cycle(3)
        assert g.edges == ((0, 1), (0, 2), (1, 2))

    def test_cycle_degrees_all_two(self):
        assert np.all(build_cycle(10).degrees() == 2)

    def test_cycle_four_is_a_ring(self):
        a = build_cycle(4).adjacency()
        assert a[0, 2] == 0 and a[1, 3] == 0
        assert a[0, 1] == 1 and a[2, 3] == 1

    def test_cycle_too_small(self):
        with pytest.raises(ValueError):
            build_cycle(2)

    def test_complete_degrees(self):
        assert np.all(build_complete(10).degrees() == 9)

    def test_complete_two_nodes(self):
        assert build_complete(2).edges == ((0, 1),)

    def test_complete_edge_count(self):
        assert len(build_complete(5).edges) == 10

    def test_complete_too_small(self):
        with pytest.raises(ValueError):
            build_complete(1)

    def test_star_hub_is_node_zero(self):
        g = build_star(10)
        deg = g.degrees()
        assert deg[0] == 9
        assert np.all(deg[1:] == 1)

    def test_star_five_edges(self):
        assert build_star(5).edges == ((0, 1), (0, 2), (0, 3), (0, 4))

    def test_star_too_small(self):
        with pytest.raises(ValueError):
            build_star(2)


class TestErdosRenyi:
    def test_connected_and_mean_degree(self):
        g = build_erdos_renyi(100, 4.0, seed=7)
        assert_valid_graph(g)
        mean_degree = g.degrees().mean()
        assert 3.0 <= mean_degree <= 5.0

    def test_full_density_gives_complete(self):
        g = build_erdos_renyi(10, 9.0, seed=1)
        assert g.edges == build_complete(10).edges

    def test_deterministic(self):
        a = build_erdos_renyi(50, 4.0, seed=3)
        b = build_erdos_renyi(50, 4.0, seed=3)
        assert a.edges == b.edges

    def test_seed_changes_sample(self):
        a = build_erdos_renyi(50, 4.0, seed=3)
        b = build_erdos_renyi(50, 4.0, seed=4)
        assert a.edges != b.edges

    def test_bad_degree_rejected(self):
        with pytest.raises(ValueError):
            build_erdos_renyi(10, 0.0, seed=1)
        with pytest.raises(ValueError):
            build_erdos_renyi(10, 9.5, seed=1)

    def test_retry_exhaustion(self):
        # p so small that 200 nodes cannot come out connected
        with pytest.raises(GraphGenerationError):
            build_erdos_renyi(200, 0.05, seed=1)


class TestWattsStrogatz:
    def test_no_rewire_is_ring_lattice(self):
        g = build_watts_strogatz(100, 4, 0.0, seed=1)
        assert np.all(g.degrees() == 4)
        a = g.adjacency()
        for i in range(100):
            for d in (1, 2):
                assert a[i, (i + d) % 100] == 1

    def test_connected_and_mean_degree(self):
        g = build_watts_strogatz(100, 4, 0.1, seed=1)
        assert_valid_graph(g)
        assert g.degrees().mean() == 4.0

    def test_edge_count_preserved_at_full_rewire(self):
        g = build_watts_strogatz(100, 4, 1.0, seed=1)
        assert len(g.edges) == 200

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.5, 1.0])
    def test_edge_count_invariant(self, p):
        g = build_watts_strogatz(60, 6, p, seed=9)
        assert len(g.edges) == 60 * 3

    def test_deterministic(self):
        a = build_watts_strogatz(80, 4, 0.3, seed=5)
        b = build_watts_strogatz(80, 4, 0.3, seed=5)
        assert a.edges == b.edges

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            build_watts_strogatz(10, 3, 0.1, seed=1)

    def test_k_not_below_n(self):
        with pytest.raises(ValueError):
            build_watts_strogatz(4, 4, 0.1, seed=1)


class TestBarabasiAlbert:
    def test_seed_clique_plus_attachment_edge_count(self):
        g = build_barabasi_albert(100, 2, seed=7)
        assert len(g.edges) == 2 * (100 - 2) + 1
        assert abs(2 * len(g.edges) / 100 - 4.0) < 0.1

    def test_triangle_for_n3_m2(self):
        g = build_barabasi_albert(3, 2, seed=0)
        assert g.edges == ((0, 1), (0, 2), (1, 2))

    def test_hub_emerges(self):
        g = build_barabasi_albert(100, 2, seed=7)
        deg = g.degrees()
        assert deg.max() >= 3 * deg.mean()

    def test_connected(self):
        assert_valid_graph(build_barabasi_albert(100, 2, seed=7))

    def test_deterministic(self):
        a = build_barabasi_albert(60, 3, seed=11)
        b = build_barabasi_albert(60, 3, seed=11)
        assert a.edges == b.edges

    def test_m_too_large(self):
        with pytest.raises(ValueError):
            build_barabasi_albert(5, 5, seed=1)


@settings(max_examples=25, deadline=None)
@given(family=st.sampled_from(["er", "ws", "ba"]),
       n=st.integers(min_value=6, max_value=40),
       seed=st.integers(min_value=0, max_value=2**31))
def test_generator_outputs_valid_and_reproducible(family, n, seed):
    def make():
        if family == "er":
            return build_erdos_renyi(n, 3.0, seed)
        if family == "ws":
            return build_watts_strogatz(n, 4, 0.2, seed)
        return build_barabasi_albert(n, 2, seed)

    g1, g2 = make(), make()
    assert g1.edges == g2.edges
    assert_valid_graph(g1)


class TestLaplacian:
    def test_triangle_matrix(self):
        expected = np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], dtype=float)
        assert np.array_equal(laplacian(build_cycle(3)), expected)

    def test_complete_two(self):
        assert np.array_equal(laplacian(build_complete(2)), [[1, -1], [-1, 1]])

    def test_star_three(self):
        expected = np.array([[2, -1, -1], [-1, 1, 0], [-1, 0, 1]], dtype=float)
        assert np.array_equal(laplacian(build_star(3)), expected)

    @pytest.mark.parametrize("g", [build_cycle(12), build_star(9),
                                   build_erdos_renyi(30, 4.0, seed=2),
                                   build_barabasi_albert(30, 2, seed=2)])
    def test_row_sums_zero_and_psd(self, g):
        lap = laplacian(g)
        assert np.all(lap.sum(axis=1) == 0.0)
        assert np.array_equal(lap, lap.T)
        assert np.linalg.eigvalsh(lap).min() >= -1e-12


class TestCloseness:
    def test_complete_all_ones(self):
        assert np.allclose(closeness_centrality(build_complete(10)), 1.0)

    def test_star_values(self):
        c = closeness_centrality(build_star(10))
        assert c[0] == pytest.approx(1.0)
        assert np.allclose(c[1:], 9.0 / 17.0)

    def test_cycle_four(self):
        assert np.allclose(closeness_centrality(build_cycle(4)), 0.75)

    def test_upper_bound_one_iff_adjacent_to_all(self):
        g = build_barabasi_albert(25, 2, seed=3)
        c = closeness_centrality(g)
        deg = g.degrees()
        assert np.all(c <= 1.0 + 1e-12)
        for i in range(g.n):
            assert (c[i] == pytest.approx(1.0)) == (deg[i] == g.n - 1)

    def test_disconnected_rejected(self):
        g = Graph(4, ((0, 1), (2, 3)))
        with pytest.raises(ValueError):
            closeness_centrality(g)

    def test_bfs_distances(self):
        dist = shortest_path_lengths(build_cycle(6), 0)
        assert dist.tolist() == [0, 1, 2, 3, 2, 1]


class TestSelectNode:
    def test_star_highest_degree_is_hub(self):
        assert select_node(build_star(10), NodePolicy.highest_degree()) == 0

    def test_star_lowest_degree_tie_break(self):
        assert select_node(build_star(10), NodePolicy.lowest_degree()) == 1

    def test_random_deterministic(self):
        g = build_cycle(10)
        picks = {select_node(g, NodePolicy.random(5)) for _ in range(5)}
        assert len(picks) == 1

    def test_explicit_in_range(self):
        assert select_node(build_cycle(5), NodePolicy.explicit(3)) == 3

    def test_explicit_out_of_range(self):
        with pytest.raises(ValueError):
            select_node(build_cycle(5), NodePolicy.explicit(5))

    def test_highest_closeness_on_star(self):
        assert select_node(build_star(7), NodePolicy.highest_closeness()) == 0

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            NodePolicy("nonsense")
        with pytest.raises(ValueError):
            NodePolicy("explicit")
        with pytest.raises(ValueError):
            NodePolicy("random")


class TestGraphJson:
    def test_round_trip(self):
        g = build_barabasi_albert(20, 2, seed=1)
        assert Graph.from_json(g.to_json()).edges == g.edges

    def test_canonical_sorted_edges(self):
        g = Graph(4, ((3, 2), (1, 0), (0, 2)))
        data = json.loads(g.to_json())
        assert data["edges"] == [[0, 1], [0, 2], [2, 3]]

    def test_digest_stable_under_permutation(self):
        a = Graph(4, ((3, 2), (1, 0), (0, 2)))
        b = Graph(4, ((0, 2), (2, 3), (0, 1)))
        assert a.digest() == b.digest()

    def test_digest_distinguishes_graphs(self):
        assert Graph(4, ((0, 1),)).digest() != Graph(4, ((0, 2),)).digest()

    def test_rejects_self_loop_and_range(self):
        with pytest.raises(ValueError):
            Graph(3, ((1, 1),))
        with pytest.raises(ValueError):
            Graph(3, ((0, 3),))
