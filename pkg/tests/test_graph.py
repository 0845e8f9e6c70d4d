import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from egnash.graph import (
    Graph,
    GraphError,
    caterpillar,
    enumerate_independent_dominating_sets,
    erdos_renyi,
    format_edge_list,
    from_edge_list,
    is_dominating,
    is_independent,
    mask_to_set,
    parse_edge_list,
    star,
)

from randgen import connected_graph


def brute_force_ids(g: Graph):
    """Full subset scan, checking both properties straight from the edge list."""
    out = []
    for mask in range(1 << g.n):
        s = {v for v in g.vertices if mask >> (v - 1) & 1}
        independent = not any(u in s and v in s for u, v in g.edges)
        dominated = all(
            v in s or any((min(v, w), max(v, w)) in g.edges for w in s) for v in g.vertices
        )
        if independent and dominated:
            out.append(frozenset(s))
    return out


def check_invariants(g: Graph):
    a = g.adjacency
    assert np.array_equal(a, a.T)
    assert not np.any(np.diag(a))
    assert set(np.unique(a)) <= {0, 1}
    assert np.array_equal(g.degrees, a.sum(axis=1))


class TestConstructors:
    def test_path_p3(self, p3):
        assert p3.n == 3
        assert list(p3.degrees) == [1, 2, 1]
        check_invariants(p3)

    def test_k2(self, k2):
        assert list(k2.degrees) == [1, 1]

    def test_duplicates_collapse(self, p3):
        assert from_edge_list(3, [(1, 2), (2, 1), (2, 3)]) == p3

    @pytest.mark.parametrize(
        "n, edges, msg",
        [
            (3, [(1, 4)], "outside"),
            (3, [(0, 1)], "outside"),
            (3, [(2, 2)], "self-loop"),
            (0, [], "positive"),
            (3, [(1, 2, 3)], "pair"),
        ],
    )
    def test_rejects(self, n, edges, msg):
        with pytest.raises(GraphError, match=msg):
            from_edge_list(n, edges)

    def test_caterpillar_reference_instance(self):
        g = caterpillar(8, [0, 1, 0, 5, 0, 0, 4, 0])
        assert g.n == 18
        assert len(g.edges) == 17
        assert g.neighbors(9) == [2]
        for leaf in range(10, 15):
            assert g.neighbors(leaf) == [4]
        for leaf in range(15, 19):
            assert g.neighbors(leaf) == [7]
        # incident-edge counts on the constructed graph
        assert sum(4 in e for e in g.edges) == g.degree(4) == 7
        assert sum(7 in e for e in g.edges) == g.degree(7) == 6
        assert g.degree(1) == 1
        check_invariants(g)

    def test_caterpillar_without_leaves_is_k2(self, k2):
        assert caterpillar(2, [0, 0]) == k2

    def test_caterpillar_length_mismatch(self):
        with pytest.raises(GraphError):
            caterpillar(3, [0, 1])

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=8))
    def test_caterpillar_counts(self, branches):
        g = caterpillar(len(branches), branches)
        assert g.n == len(branches) + sum(branches)
        assert len(g.edges) == len(branches) - 1 + sum(branches)
        check_invariants(g)

    def test_star(self):
        assert list(star(5).degrees) == [4, 1, 1, 1, 1]
        assert list(star(4).degrees) == [3, 1, 1, 1]
        assert star(2) == from_edge_list(2, [(1, 2)])
        with pytest.raises(GraphError):
            star(1)

    def test_erdos_renyi_connected_and_deterministic(self):
        g = erdos_renyi(8, 4.0, seed=3)
        assert g.n == 8 and g.is_connected()
        assert erdos_renyi(8, 4.0, seed=3) == g
        check_invariants(g)

    def test_erdos_renyi_k2(self, k2):
        for seed in range(5):
            assert erdos_renyi(2, 1.0, seed) == k2

    def test_erdos_renyi_gives_up(self):
        with pytest.raises(GraphError, match="connected"):
            erdos_renyi(30, 0.05, seed=0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 12), st.floats(1.5, 6.0), st.integers(0, 10**6))
    def test_erdos_renyi_property(self, n, d, seed):
        d = min(d, n - 0.5)
        g = erdos_renyi(n, d, seed)
        assert g.is_connected()
        assert erdos_renyi(n, d, seed) == g


class TestPredicates:
    def test_independent(self, p3):
        assert is_independent(p3, {1, 3})
        assert not is_independent(p3, {1, 2})
        assert is_independent(p3, set())

    def test_dominating(self, p3):
        assert is_dominating(p3, {2})
        assert not is_dominating(p3, {1})
        assert is_dominating(p3, {1, 2, 3})

    def test_subset_check(self, p3):
        with pytest.raises(GraphError):
            is_independent(p3, {4})


class TestIdsEnumeration:
    def test_p3(self, p3):
        assert enumerate_independent_dominating_sets(p3) == brute_force_ids(p3) == [{2}, {1, 3}]

    def test_k2(self, k2):
        assert enumerate_independent_dominating_sets(k2) == [{1}, {2}]

    def test_star5(self):
        g = star(5)
        assert enumerate_independent_dominating_sets(g) == brute_force_ids(g) == [{1}, {2, 3, 4, 5}]

    def test_isolated_vertices(self):
        g = from_edge_list(3, [(1, 2)])
        assert enumerate_independent_dominating_sets(g) == brute_force_ids(g)

    def test_guard(self):
        g = from_edge_list(31, [])
        with pytest.raises(GraphError, match="limited"):
            enumerate_independent_dominating_sets(g)

    def test_matches_brute_force(self):
        rng = random.Random(1)
        for _ in range(150):
            n = rng.randint(1, 12)
            g = connected_graph(rng, n) if rng.random() < 0.8 else from_edge_list(
                n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.3]
            )
            got = enumerate_independent_dominating_sets(g)
            assert got == brute_force_ids(g)
            for s in got:
                assert is_independent(g, s) and is_dominating(g, s)

    def test_mask_roundtrip(self):
        assert mask_to_set(0b101) == {1, 3}


class TestEdgeListFormat:
    def test_parse(self, p3):
        text = "# a path\nn 3\n1 2  # first edge\n\n2 3\n"
        assert parse_edge_list(text) == p3

    def test_roundtrip(self):
        g = caterpillar(4, [1, 0, 2, 0])
        assert parse_edge_list(format_edge_list(g)) == g

    @pytest.mark.parametrize(
        "text, msg",
        [
            ("1 2\n", "header"),
            ("n x\n", "integer"),
            ("n 3\n1 2 0.5\n", "weighted"),
            ("n 3\n1 a\n", "non-integer"),
            ("n 3\n1 5\n", "outside"),
            ("", "missing"),
        ],
    )
    def test_rejects(self, text, msg):
        with pytest.raises(GraphError, match=msg):
            parse_edge_list(text)
