import itertools

import numpy as np
import pytest

from netpeer import graph as graphmod
from netpeer.errors import ConnectivityError, ValidationError
from netpeer.graph import (
    Graph,
    degrees,
    from_edges,
    generate_connected_er,
    generate_er,
    induced_subgraph,
    is_connected,
    read_edge_list,
    write_edge_list,
)


def star(n):
    return from_edges(n, [(0, k) for k in range(1, n)])


def path(n):
    return from_edges(n, [(k, k + 1) for k in range(n - 1)])


def complete(n):
    return from_edges(n, list(itertools.combinations(range(n), 2)))


def reachable_oracle(g):
    """Brute-force reachability: DFS from every vertex over python sets."""
    n = g.n_vertices
    if n <= 1:
        return True
    adj = {j: set(int(k) for k in g.neighbors[j]) for j in range(n)}
    for start in range(n):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            return False
    return True


class TestGenerateEr:
    def test_p_zero_is_empty(self):
        g = generate_er(5, 0.0, np.random.default_rng(0))
        assert g.n_edges() == 0
        assert list(degrees(g)) == [0] * 5

    def test_p_one_is_complete(self):
        g = generate_er(5, 1.0, np.random.default_rng(0))
        assert list(degrees(g)) == [4] * 5

    def test_mean_edge_count_matches_binomial(self):
        # expected edges = p * n(n-1)/2 = 4995 at n=1000, p=0.01
        counts = [
            generate_er(1000, 0.01, np.random.default_rng(s)).n_edges()
            for s in range(200)
        ]
        assert abs(np.mean(counts) - 4995.0) / 4995.0 < 0.02

    def test_mean_degree_matches_binomial(self):
        means = [
            degrees(generate_er(1000, 0.01, np.random.default_rng(s))).mean()
            for s in range(200)
        ]
        assert abs(np.mean(means) - 9.99) / 9.99 < 0.05

    @pytest.mark.parametrize("n,p", [(0, 0.5), (1, 0.5), (10, 0.3), (50, 0.05), (200, 0.9)])
    def test_invariants_hold(self, n, p):
        for seed in range(5):
            generate_er(n, p, np.random.default_rng(seed)).validate()

    def test_deterministic_given_seed(self):
        a = generate_er(100, 0.05, np.random.default_rng(7))
        b = generate_er(100, 0.05, np.random.default_rng(7))
        assert all(np.array_equal(x, y) for x, y in zip(a.neighbors, b.neighbors))

    def test_rejects_bad_p(self):
        with pytest.raises(ValidationError):
            generate_er(5, 1.5, np.random.default_rng(0))
        with pytest.raises(ValidationError):
            generate_er(-1, 0.5, np.random.default_rng(0))


class TestConnectedEr:
    def test_returns_connected(self):
        g = generate_connected_er(50, 0.15, np.random.default_rng(3))
        assert is_connected(g)

    def test_exhausted_attempts(self):
        with pytest.raises(ConnectivityError) as err:
            generate_connected_er(100, 0.001, np.random.default_rng(0), max_attempts=3)
        assert err.value.attempts == 3


class TestIsConnected:
    def test_path_connected(self):
        assert is_connected(path(3))

    def test_two_disjoint_edges(self):
        assert not is_connected(from_edges(4, [(0, 1), (2, 3)]))

    def test_nine_vertex_connected(self):
        # a 9-vertex connected graph with a few cross ties
        g = from_edges(9, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6),
                           (6, 7), (7, 8), (1, 5), (2, 7)])
        assert is_connected(g)

    def test_trivial_graphs(self):
        assert is_connected(Graph(0, []))
        assert is_connected(from_edges(1, []))

    def test_matches_oracle_exhaustively_small(self):
        # every graph on up to 6 vertices
        for n in range(2, 7):
            pairs = list(itertools.combinations(range(n), 2))
            for bits in range(2 ** len(pairs)):
                edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
                g = from_edges(n, np.array(edges).reshape(-1, 2))
                assert is_connected(g) == reachable_oracle(g)

    def test_matches_oracle_random_larger(self):
        # random sample at 7 and 8 vertices (exhaustive is out of reach)
        rng = np.random.default_rng(11)
        for n in (7, 8):
            pairs = list(itertools.combinations(range(n), 2))
            for _ in range(300):
                mask = rng.random(len(pairs)) < rng.uniform(0.05, 0.5)
                edges = [pairs[i] for i in range(len(pairs)) if mask[i]]
                g = from_edges(n, np.array(edges).reshape(-1, 2))
                assert is_connected(g) == reachable_oracle(g)


class TestDegrees:
    def test_complete_four(self):
        assert list(degrees(complete(4))) == [3, 3, 3, 3]

    def test_star_five(self):
        assert list(degrees(star(5))) == [4, 1, 1, 1, 1]


class TestInducedSubgraph:
    def test_full_set_is_identity(self):
        g = generate_er(30, 0.2, np.random.default_rng(1))
        sub, mapping = induced_subgraph(g, np.arange(30))
        assert np.array_equal(mapping, np.arange(30))
        assert all(np.array_equal(a, b) for a, b in zip(g.neighbors, sub.neighbors))

    def test_degree_monotone(self):
        g = generate_er(40, 0.3, np.random.default_rng(2))
        members = np.array([0, 3, 5, 8, 13, 21, 34])
        sub, mapping = induced_subgraph(g, members)
        full = degrees(g)
        for old in members:
            assert sub.degree(int(mapping[old])) <= full[old]

    def test_edges_require_both_endpoints(self):
        g = path(4)
        sub, mapping = induced_subgraph(g, [0, 2, 3])
        # only the 2-3 edge survives
        assert sub.n_edges() == 1
        assert sub.degree(int(mapping[0])) == 0

    def test_out_of_range_member(self):
        with pytest.raises(ValidationError):
            induced_subgraph(path(4), [0, 7])


class TestEdgeListIO:
    def test_round_trip(self, tmp_path):
        g = generate_er(25, 0.2, np.random.default_rng(5))
        p = tmp_path / "g.edges"
        write_edge_list(g, p)
        h = read_edge_list(p)
        assert h.n_vertices == g.n_vertices
        assert all(np.array_equal(a, b) for a, b in zip(g.neighbors, h.neighbors))

    def test_header_format(self, tmp_path):
        p = tmp_path / "g.edges"
        write_edge_list(path(3), p, tags=("sample",))
        lines = p.read_text().splitlines()
        assert lines[0] == "# vertices=3"
        assert lines[1] == "# sample"
        assert lines[2:] == ["0,1", "1,2"]

    def test_rejects_self_loop(self, tmp_path):
        p = tmp_path / "bad.edges"
        p.write_text("# vertices=3\n1,1\n")
        with pytest.raises(ValidationError):
            read_edge_list(p)

    def test_rejects_duplicate(self, tmp_path):
        p = tmp_path / "bad.edges"
        p.write_text("# vertices=3\n0,1\n0,1\n")
        with pytest.raises(ValidationError):
            read_edge_list(p)

    def test_rejects_missing_header(self, tmp_path):
        p = tmp_path / "bad.edges"
        p.write_text("0,1\n")
        with pytest.raises(ValidationError):
            read_edge_list(p)

    def test_rejects_reversed_pair(self, tmp_path):
        p = tmp_path / "bad.edges"
        p.write_text("# vertices=3\n2,1\n")
        with pytest.raises(ValidationError):
            read_edge_list(p)


class TestFromEdges:
    def test_rejects_duplicates_and_loops(self):
        with pytest.raises(ValidationError):
            from_edges(3, [(0, 1), (1, 0)])
        with pytest.raises(ValidationError):
            from_edges(3, [(2, 2)])
        with pytest.raises(ValidationError):
            from_edges(3, [(0, 5)])
