import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modspec.bounds import (BoundRecord, check_communities1, check_communities2, check_qG_lower,
                            check_qG_upper, check_qprime_bound, check_subset_bound,
                            check_subset_bound_all, check_trace_product,
                            check_partition_cardinality, sweep_cut, verify_all)
from modspec.errors import PreconditionError
from modspec.generators import (clique_of_cliques, random_connected, random_regular, standard,
                                star_with_loops)
from modspec.graph import Graph
from modspec.modularity import build_modularity
from modspec.oracle import best_cut, best_partition
from modspec.spectral import algebraic_modularity


def test_record_tolerance():
    r = BoundRecord.compare("x", 1.0 + 1e-9, 1.0)
    assert r.holds and r.slack < 0 and r.tolerance == pytest.approx(2e-8)
    assert not BoundRecord.compare("x", 1.1, 1.0).holds
    assert BoundRecord.skip("x", "why").holds is None


class TestSubsetBound:
    def test_whole_set_is_equality(self, bridge):
        r = check_subset_bound(bridge, range(6))
        assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == 0 and r.holds

    def test_triangle(self, bridge):
        m = algebraic_modularity(bridge).value
        r = check_subset_bound(bridge, [0, 1, 2])
        assert r.lhs == pytest.approx(2.5)
        assert r.rhs == pytest.approx(m * 9 / 6)
        assert r.holds

    @given(st.integers(2, 8), st.integers(0, 2**31))
    @settings(max_examples=40, deadline=None)
    def test_exhaustive(self, n, seed):
        g = random_connected(n, 0.5, seed)
        assert check_subset_bound_all(g).holds

    def test_holds_for_negative_m(self, k4):
        # the lemma needs no sign condition on m(G)
        assert check_subset_bound_all(k4).holds

    def test_cap(self):
        assert check_subset_bound_all(standard("cycle", 20)).skipped


class TestOptimumBounds:
    def test_bridge(self, bridge):
        m = algebraic_modularity(bridge).value
        r = check_qprime_bound(bridge)
        assert r.lhs == pytest.approx(5 / 14)
        assert r.rhs == pytest.approx(m * 6 / 28)
        assert r.holds
        u = check_qG_upper(bridge)
        assert u.lhs == pytest.approx(5 / 14) and u.rhs == pytest.approx(5 * m / 14)
        assert u.holds
        low = check_qG_lower(bridge)
        assert low.rhs == pytest.approx(5 / 14)
        assert low.lhs == pytest.approx(-(bridge.degree @ bridge.degree) / 14 ** 2)
        assert check_partition_cardinality(bridge).lhs == 2

    def test_clique_four_breaks_the_upper_bounds(self, k4):
        # m(K4) = -1 < 0: the upper bounds assume m(G) >= 0 and fail here
        assert not check_qprime_bound(k4).holds
        assert not check_qG_upper(k4).holds
        assert check_qG_lower(k4).holds
        assert check_qG_lower(k4).lhs == pytest.approx(-0.25)
        assert check_partition_cardinality(k4).holds

    @given(st.integers(3, 9), st.floats(0.2, 0.9), st.integers(0, 2**31))
    @settings(max_examples=40, deadline=None)
    def test_clipped_upper_bounds_hold(self, n, p, seed):
        g = random_connected(n, p, seed)
        m = max(algebraic_modularity(g).value, 0.0)
        tol = 1e-8
        assert best_cut(g).q_prime <= m * n / (2 * g.volume) + tol
        assert best_partition(g).q_star <= (n - 1) * m / g.volume + tol

    def test_skipped_above_cap(self):
        g = clique_of_cliques(4, 3, 3)
        assert check_qG_upper(g).skipped
        assert check_qG_lower(g).skipped
        assert check_partition_cardinality(g).skipped
        assert check_qprime_bound(g).holds

    def test_heavy_loops_give_positive_floor(self):
        g = Graph.from_edges(3, [(0, 0, 5.0), (1, 1, 5.0), (2, 2, 5.0), (0, 1), (1, 2)])
        tr = np.trace(build_modularity(g).matrix)
        assert tr > 0
        r = check_qG_lower(g)
        assert r.lhs > 0 and r.holds


class TestTraceProduct:
    def test_identity_and_square_are_equalities(self):
        a = np.array([[2.0, 1.0], [1.0, -1.0]])
        assert check_trace_product(a, np.eye(2)).slack == pytest.approx(0, abs=1e-12)
        assert check_trace_product(a, a).slack == pytest.approx(0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="order"):
            check_trace_product(np.eye(2), np.eye(3))

    @given(st.integers(1, 8), st.integers(0, 2**31))
    @settings(max_examples=60, deadline=None)
    def test_random_pairs(self, n, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=(2, n, n))
        assert check_trace_product(a + a.T, b + b.T).slack >= -1e-9


class TestCommunityCounts:
    def test_bridge_triangles(self, bridge):
        r = check_communities1(bridge, [[0, 1, 2], [3, 4, 5]])
        assert r.holds and r.lhs == 1 and r.rhs >= 1
        assert check_communities2(bridge, [[0, 1, 2], [3, 4, 5]]).holds

    def test_clique_of_cliques(self):
        g = clique_of_cliques(4, 3, 3)
        sets = [[0, 1, 2, 3]] + [[4 + 3 * c + i for i in range(3)] for c in range(3)]
        r = check_communities1(g, sets)
        assert r.holds and r.rhs >= 3

    def test_single_set(self, bridge):
        r = check_communities1(bridge, [[0, 1, 2]])
        assert r.holds and r.lhs == 0

    def test_hypothesis_failures_are_named(self, bridge):
        with pytest.raises(PreconditionError, match=r"set 0: vol S"):
            check_communities1(bridge, [[0, 1, 2, 3]])
        with pytest.raises(PreconditionError, match=r"set 1: 2\|E\(S\)\|"):
            check_communities1(bridge, [[0, 1, 2], [3]])
        with pytest.raises(PreconditionError, match="overlaps"):
            check_communities1(bridge, [[0, 1, 2], [2, 3, 4]])

    def test_clique_partition_rejected(self, k4):
        with pytest.raises(PreconditionError, match="Q\\(S\\) = .* < 0"):
            check_communities2(k4, [[0, 1], [2, 3]])
        with pytest.raises(PreconditionError, match="two sets"):
            check_communities2(k4, [[0, 1, 2, 3]])

    @given(st.integers(4, 9), st.integers(0, 2**31))
    @settings(max_examples=30, deadline=None)
    def test_optimal_partitions(self, n, seed):
        g = random_connected(n, 0.4, seed)
        part = best_partition(g).partition
        if len(part) >= 2:
            assert check_communities2(g, part).holds
        assert check_partition_cardinality(g).holds


class TestSweepCut:
    def test_cycle_six(self):
        s = sweep_cut(standard("cycle", 6))
        assert s.k == 2 and s.m_value == pytest.approx(1.0)
        assert s.holds and s.corollary_holds
        assert s.q_prime == pytest.approx(1 / 6)
        assert s.q_star == pytest.approx(1.0)

    def test_petersen(self):
        s = sweep_cut(standard("petersen"))
        assert s.holds and s.corollary_holds
        assert s.corollary_upper == pytest.approx(1 / 6)

    def test_clique_four_chain(self, k4):
        s = sweep_cut(k4)
        assert s.corollary_lower == pytest.approx(1 / 8 - np.sqrt(2 / 3))
        assert s.corollary_upper == pytest.approx(-1 / 6)
        assert s.q_prime == pytest.approx(-1 / 8)
        # the upper end fails because m(K4) < 0
        assert s.holds and s.corollary_holds is False

    @pytest.mark.parametrize("seed", range(8))
    def test_random_cubic_lower_bound(self, seed):
        g = random_regular(3, 10, seed)
        s = sweep_cut(g)
        assert s.holds
        assert s.corollary_lower <= s.q_prime + 1e-12

    def test_rejections(self, bridge):
        with pytest.raises(PreconditionError, match="k-regular"):
            sweep_cut(bridge)
        with pytest.raises(PreconditionError, match="simple"):
            sweep_cut(star_with_loops(1, 10, 5)[0])
        with pytest.raises(PreconditionError):
            sweep_cut(Graph.from_edges(4, [(0, 1), (2, 3)]))


class TestVerifyAll:
    def test_bridge_holds(self, bridge):
        rep = verify_all(bridge)
        assert rep.holds
        assert rep.q_G == pytest.approx(5 / 14) and rep.q_prime == pytest.approx(5 / 14)
        assert rep["sweep_lower"].skipped

    def test_petersen_holds(self):
        rep = verify_all(standard("petersen"))
        assert rep.holds
        assert rep["cheeger_upper"].holds

    def test_disconnected_skips_spectral_bounds(self):
        rep = verify_all(Graph.from_edges(4, [(0, 1), (2, 3)]))
        assert rep.holds
        assert rep["qG_upper"].skipped and "disconnected" in rep["qG_upper"].detail
        assert rep["qG_lower"].holds

    def test_clique_four_reports_violations(self, k4):
        names = {r.name for r in verify_all(k4).violations}
        assert names == {"qprime_upper", "qG_upper", "cheeger_upper"}

    def test_large_graph_skips_exact_checks(self):
        rep = verify_all(clique_of_cliques(4, 3, 3))
        assert rep["qG_upper"].skipped
        assert rep["qprime_upper"].holds

    def test_edgeless(self):
        rep = verify_all(Graph(np.zeros((2, 2))))
        assert rep.records[0].skipped
