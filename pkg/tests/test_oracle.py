from functools import lru_cache
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modspec.errors import OracleCapError
from modspec.generators import clique_of_cliques, random_connected, standard
from modspec.graph import Graph
from modspec.modularity import build_modularity, joint_modularity, modularity_Q
from modspec.oracle import best_cut, best_partition, certify_indivisible, solve

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147]


def plain_q(g, s):
    a = g.adjacency.tolist()
    d = g.degree.tolist()
    return sum(a[i][j] for i in s for j in s) - sum(d[i] for i in s) ** 2 / g.volume


def brute_cut(g):
    """Best q(S) over every nonempty proper subset, no symmetry tricks."""
    best = -np.inf
    for r in range(1, g.n):
        for s in combinations(range(g.n), r):
            best = max(best, plain_q(g, s))
    return 2 * best / g.volume


def dp_partition(g):
    """Best sum of Q over set partitions by dynamic programming over bitmasks."""
    n = g.n
    q = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        q[mask] = plain_q(g, [i for i in range(n) if mask >> i & 1])

    @lru_cache(maxsize=None)
    def f(mask):
        if not mask:
            return 0.0
        low = mask & -mask
        rest = mask ^ low
        best = -np.inf
        sub = rest
        while True:
            best = max(best, q[sub | low] + f(rest ^ sub))
            if not sub:
                break
            sub = (sub - 1) & rest
        return best

    return f((1 << n) - 1) / g.volume


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            a[i, j] = a[j, i] = draw(st.sampled_from([0.0, 0.0, 1.0, 1.0, 2.0] if i != j
                                                     else [0.0, 0.0, 0.0, 1.5]))
    if not a.any():
        a[0, 1] = a[1, 0] = 1.0
    return Graph(a)


class TestBestCut:
    def test_bridge(self, bridge):
        r = best_cut(bridge)
        assert r.q_prime == pytest.approx(5 / 14)
        assert r.members.members == (0, 1, 2)
        assert r.evaluated == 31

    def test_clique_four(self, k4):
        # Q(S) = |S|(|S| - 4) * 3 / 12 for K4; singletons give -3/4, pairs -1
        r = best_cut(k4)
        assert r.q_prime == pytest.approx(-1 / 8)
        assert r.members.members == (0,)
        assert modularity_Q(k4, [0, 1]) == pytest.approx(-1.0)

    def test_path_three(self, p3):
        r = best_cut(p3)
        assert r.q_prime == pytest.approx(-1 / 8)
        assert r.members.members == (0,)

    def test_cap(self):
        with pytest.raises(OracleCapError, match="24"):
            best_cut(standard("cycle", 25))
        with pytest.raises(OracleCapError):
            best_cut(Graph(np.ones((1, 1))))

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g):
        r = best_cut(g)
        assert r.q_prime == pytest.approx(brute_cut(g), abs=1e-12)
        assert 0 in r.members
        assert 2 * modularity_Q(g, r.members) / g.volume == pytest.approx(r.q_prime)

    def test_ties_are_broken_lexicographically(self):
        g = standard("cycle", 6)
        r = best_cut(g)
        # the three-vertex arcs containing 0 tie; (0, 1, 2) is the smallest
        assert r.members.members == (0, 1, 2)

    def test_chunked_sweep(self):
        # 2^16 cuts cross the chunk boundary
        g = random_connected(17, 0.3, seed=2)
        r = best_cut(g)
        assert r.evaluated == 2 ** 16 - 1
        assert 2 * modularity_Q(g, r.members) / g.volume == pytest.approx(r.q_prime)


class TestBestPartition:
    def test_bridge(self, bridge):
        r = best_partition(bridge)
        assert r.q_star == pytest.approx(5 / 14)
        assert [b.members for b in r.partition] == [(0, 1, 2), (3, 4, 5)]
        assert r.evaluated == BELL[6]

    def test_clique_four_is_trivial(self, k4):
        r = best_partition(k4)
        assert r.q_star == pytest.approx(0.0, abs=1e-15)
        assert len(r.partition) == 1

    def test_star_is_trivial(self):
        r = best_partition(standard("star", 6))
        assert r.q_star == pytest.approx(0.0, abs=1e-15)
        assert len(r.partition) == 1

    @pytest.mark.parametrize("n", range(1, 9))
    def test_visits_every_partition_once(self, n):
        g = Graph(np.ones((n, n)))
        assert best_partition(g).evaluated == BELL[n]

    def test_cap_and_empty(self):
        with pytest.raises(OracleCapError, match="12"):
            best_partition(standard("cycle", 13))
        with pytest.raises(ValueError, match="no edges"):
            best_partition(Graph(np.zeros((2, 2))))

    @given(small_graphs(max_n=7))
    @settings(max_examples=60, deadline=None)
    def test_matches_subset_dp(self, g):
        assert best_partition(g).q_star == pytest.approx(dp_partition(g), abs=1e-12)

    @given(small_graphs(max_n=7))
    @settings(max_examples=40, deadline=None)
    def test_optimal_blocks_have_nonpositive_joint_modularity(self, g):
        blocks = list(best_partition(g).partition)
        tol = 1e-10 * max(1.0, g.volume)
        for a, b in combinations(blocks, 2):
            assert joint_modularity(g, a, b) <= tol
        for b in blocks:
            assert modularity_Q(g, b) >= -tol


class TestIndivisibility:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_cliques(self, n):
        r = certify_indivisible(standard("clique", n))
        assert r.indivisible and r.algebraically_indivisible

    def test_star(self):
        assert certify_indivisible(standard("star", 6)).indivisible

    def test_bridge_has_witness(self, bridge):
        r = certify_indivisible(bridge)
        assert not r.indivisible
        assert modularity_Q(bridge, r.witness) == pytest.approx(r.max_modularity)
        assert r.max_modularity == pytest.approx(2.5)

    def test_path_three_boundary_case(self, p3):
        # m(P3) = 0: not algebraically indivisible by the strict test, yet indivisible
        r = certify_indivisible(p3)
        assert r.indivisible
        assert r.max_modularity < 0

    def test_single_vertex(self):
        r = certify_indivisible(Graph(np.ones((1, 1))))
        assert r.indivisible

    def test_cap(self):
        with pytest.raises(OracleCapError):
            certify_indivisible(standard("cycle", 30))


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_solve_invariants(g):
    r = solve(g)
    assert r.q_star >= r.q_prime - 1e-12
    floor = np.trace(build_modularity(g).matrix) / g.volume
    assert r.q_star >= floor - 1e-12


def test_solve_respects_caps():
    g = clique_of_cliques(4, 3, 3)
    r = solve(g)
    assert r.q_prime is not None and r.q_star is None
