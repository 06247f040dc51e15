import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcentered.config import InputError, MaterializationError
from pcentered.generators import (
    FamilyParams,
    clique,
    cycle,
    debski_graph,
    debski_size,
    debski_subdivided,
    edgeless,
    gnp,
    grid,
    path,
    random_tree,
    standard,
    star,
)
from pcentered.graph import induced_subgraph, is_connected


def naive_family(p, t, b):
    """Independent dict-of-sets construction used as the size oracle."""
    if p == 0 or t == 0:
        return b, set()
    nb, eb = naive_family(p - 1, t, b)
    nc, ec = naive_family(p, t - 1, b)
    edges = set(eb)
    n = nb
    for v in range(nb):
        off = n
        edges |= {(a + off, c + off) for a, c in ec}
        edges |= {(v, off + j) for j in range(nc)}
        n += nc
    return n, edges


class TestFamily:
    @pytest.mark.parametrize("p", range(0, 4))
    @pytest.mark.parametrize("t", range(0, 4))
    @pytest.mark.parametrize("b", [2, 3])
    def test_size_recurrence_matches_materialized(self, p, t, b):
        n, m = debski_size(FamilyParams(p, t, b))
        if n > 20000:
            pytest.skip("too large to materialize in a unit test")
        g = debski_graph(FamilyParams(p, t, b))
        assert (g.n, g.m) == (n, m)
        on, oe = naive_family(p, t, b)
        assert (on, len(oe)) == (n, m)
        assert set(g.edges) == oe

    def test_known_sizes(self):
        assert debski_size(FamilyParams(2, 2, 2)) == (266, 496)
        assert debski_size(FamilyParams(2, 1, 2)) == (18, 16)
        assert debski_size(FamilyParams(1, 1, 2)) == (6, 4)

    def test_subdivided_size(self):
        g = debski_subdivided(FamilyParams(1, 1, 2))
        assert (g.n, g.m) == (30, 28)
        assert len(g.roots()) == 6

    def test_bottom_copy_is_induced(self):
        prm = FamilyParams(2, 2, 2)
        g = debski_graph(prm)
        nb, _ = debski_size(FamilyParams(1, 2, 2))
        h, _ = induced_subgraph(g, range(nb))
        assert h.edges == debski_graph(FamilyParams(1, 2, 2)).edges

    def test_materialization_guard(self):
        with pytest.raises(MaterializationError):
            debski_graph(FamilyParams(4, 4, 2))
        with pytest.raises(MaterializationError):
            debski_graph(FamilyParams(2, 2, 2), limit=100)

    def test_huge_size_is_cheap(self):
        n, m = debski_size(FamilyParams(6, 6, 8))
        assert n > 10**100 and m > 0

    def test_invalid(self):
        with pytest.raises(InputError):
            FamilyParams(1, 1, 1)
        with pytest.raises(InputError):
            FamilyParams(-1, 1)


class TestGnp:
    def test_edge_count_concentration(self):
        n, q = 60, 0.3
        pairs = n * (n - 1) // 2
        sd = math.sqrt(pairs * q * (1 - q))
        for seed in range(100):
            assert abs(gnp(n, q, seed).m - pairs * q) <= 4 * sd

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 40), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**64 - 1))
    def test_monotone_coupling(self, n, q1, q2, seed):
        lo, hi = sorted((q1, q2))
        assert set(gnp(n, lo, seed).edges) <= set(gnp(n, hi, seed).edges)

    @pytest.mark.parametrize("chunk", [1, 7, 50, 10**6])
    def test_chunking_does_not_change_stream(self, chunk):
        assert gnp(37, 0.4, 11, chunk=chunk).edges == gnp(37, 0.4, 11).edges

    def test_stream_definition(self):
        n, q, seed = 9, 0.5, 3
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        draws = rng.random(n * (n - 1) // 2)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        expected = tuple(e for e, d in zip(pairs, draws) if d < q)
        assert gnp(n, q, seed).edges == expected

    def test_extremes(self):
        assert gnp(10, 0.0, 1).m == 0
        assert gnp(10, 1.0, 1).m == 45
        assert gnp(0, 0.5, 1).n == 0
        assert gnp(1, 0.5, 1).m == 0

    def test_invalid(self):
        with pytest.raises(InputError):
            gnp(5, 1.5, 0)
        with pytest.raises(InputError):
            gnp(5, 0.5, -1)


class TestStandard:
    def test_sizes(self):
        assert (path(5).n, path(5).m) == (5, 4)
        assert (cycle(5).n, cycle(5).m) == (5, 5)
        assert cycle(2).edges == path(2).edges
        assert clique(5).m == 10
        assert (star(4).n, star(4).m) == (5, 4)
        assert (grid(3, 4).n, grid(3, 4).m) == (12, 17)
        assert edgeless(3).m == 0

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_random_tree(self, n):
        g = random_tree(n, 5)
        assert g.m == n - 1
        assert is_connected(g)
        assert random_tree(n, 5) == g

    def test_dispatch(self):
        assert standard("grid", 2, 3) == grid(2, 3)
        with pytest.raises(InputError):
            standard("wheel", 4)
