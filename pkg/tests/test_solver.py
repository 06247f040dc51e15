import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_colorings
from pcentered.centered import Coloring, is_p_centered
from pcentered.config import InputError, OracleLimitError
from pcentered.generators import clique, cycle, edgeless, gnp, path, star
from pcentered.graph import Graph, treedepth_exact
from pcentered.solver import (
    EXACT,
    LOWER_BOUND_ONLY,
    TIMEOUT,
    PartialChecker,
    chi_p_exact,
    chi_p_greedy,
    chromatic_number_exact,
    result_from_dict,
    star_chromatic_exact,
)


def brute_chi_p(g, p):
    """Smallest k for which some k-coloring passes the verifier."""
    for k in range(0, g.n + 1):
        if k == 0 and g.n:
            continue
        for f in all_colorings(g.n, k):
            if is_p_centered(g, f, p).centered:
                return k
    return g.n


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, edges)


class TestExamples:
    def test_k4(self):
        assert chi_p_exact(clique(4), 3).chi == 4

    def test_p4(self):
        res = chi_p_exact(path(4), 2)
        assert (res.status, res.chi) == (EXACT, 3)
        assert is_p_centered(path(4), res.coloring, 2).centered

    def test_p7(self):
        assert chi_p_exact(path(7), 7).chi == 3 == treedepth_exact(path(7))

    def test_greedy(self):
        f = chi_p_greedy(path(4), 2)
        assert 3 <= f.num_used <= 4
        assert is_p_centered(path(4), f, 2).centered
        assert chi_p_greedy(edgeless(5), 3).num_used == 1

    def test_empty(self):
        assert chi_p_exact(Graph(0, []), 2).chi == 0

    def test_oracles(self):
        assert chromatic_number_exact(cycle(5)) == 3
        assert star_chromatic_exact(path(4)) == 3
        assert chromatic_number_exact(edgeless(4)) == 1
        assert star_chromatic_exact(star(5)) == 2
        with pytest.raises(OracleLimitError):
            chromatic_number_exact(path(13))

    def test_invalid_p(self):
        with pytest.raises(InputError):
            chi_p_exact(path(3), 0)


class TestBruteForce:
    @settings(max_examples=40, deadline=None)
    @given(small_graphs(max_n=5), st.integers(1, 5))
    def test_matches_enumeration(self, g, p):
        res = chi_p_exact(g, p)
        assert res.status == EXACT
        assert res.chi == brute_chi_p(g, p)
        assert is_p_centered(g, res.coloring, p).centered
        assert res.coloring.num_used == res.chi


class TestPartialChecker:
    @settings(max_examples=150, deadline=None)
    @given(small_graphs(max_n=7), st.integers(1, 4), st.data())
    def test_incremental_matches_full_check(self, g, p, data):
        cols = data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
        order = data.draw(st.permutations(range(g.n)))
        chk = PartialChecker(g, p)
        for i, v in enumerate(order):
            chk.assign(v, cols[v])
            prefix = sorted(order[: i + 1])
            sub = Graph(len(prefix), [(prefix.index(a), prefix.index(b)) for a, b in g.edges
                                       if a in prefix and b in prefix])
            f = Coloring(tuple(cols[u] for u in prefix), 4)
            # a violation through v exists iff the prefix violates while the previous prefix did not
            full = is_p_centered(sub, f, p).centered
            if not full and chk.ok(v):
                # must then be an older violation not involving v
                rest = [u for u in prefix if u != v]
                sub2 = Graph(len(rest), [(rest.index(a), rest.index(b)) for a, b in g.edges
                                          if a in rest and b in rest])
                assert not is_p_centered(sub2, Coloring(tuple(cols[u] for u in rest), 4), p).centered
            if full:
                assert chk.ok(v)


class TestBudgets:
    def test_timeout(self):
        g = gnp(14, 0.5, 3)
        res = chi_p_exact(g, 2, max_nodes=5)
        assert res.status == TIMEOUT
        assert res.chi <= res.upper
        assert is_p_centered(g, res.coloring, 2).centered

    def test_max_k(self):
        res = chi_p_exact(clique(6), 2, max_k=3)
        assert res.status in (LOWER_BOUND_ONLY, EXACT)
        res = chi_p_exact(gnp(10, 0.6, 1), 3, max_k=1)
        assert res.status == LOWER_BOUND_ONLY
        assert res.chi >= 2

    def test_round_trip(self):
        res = chi_p_exact(cycle(6), 2)
        back = result_from_dict(res.to_dict())
        assert back.to_dict() == res.to_dict()
        assert "elapsed" not in res.to_dict()["stats"]

    def test_deterministic(self):
        g = gnp(11, 0.4, 9)
        assert chi_p_exact(g, 2).to_dict() == chi_p_exact(g, 2).to_dict()


class TestGreedy:
    @settings(max_examples=60, deadline=None)
    @given(small_graphs(max_n=9), st.integers(1, 4), st.sampled_from(["natural", "degree", "random"]))
    def test_valid_and_above_exact(self, g, p, order):
        f = chi_p_greedy(g, p, order, seed=1)
        assert is_p_centered(g, f, p).centered
        if g.n <= 7:
            assert f.num_used >= chi_p_exact(g, p).chi

    def test_unknown_order(self):
        with pytest.raises(InputError):
            chi_p_greedy(path(3), 1, "sideways")


def test_random_sample_consistency():
    rng = np.random.default_rng(5)
    for _ in range(15):
        n = int(rng.integers(3, 9))
        g = gnp(n, float(rng.uniform(0.2, 0.8)), int(rng.integers(0, 10**6)))
        assert chi_p_exact(g, 1).chi == chromatic_number_exact(g)
        assert chi_p_exact(g, 2).chi == star_chromatic_exact(g)
        assert chi_p_exact(g, n).chi == treedepth_exact(g)
