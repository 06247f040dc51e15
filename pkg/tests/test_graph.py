import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcentered.config import InputError, OracleLimitError
from pcentered.generators import FamilyParams, clique, cycle, debski_graph, edgeless, path, star
from pcentered.graph import (
    FRESH,
    ROOT,
    Graph,
    connected_components,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    induced_subgraph,
    is_connected,
    max_degree,
    subdivide,
    treedepth_exact,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


def elimination_order_treedepth(g):
    """Exhaustive search: each order picks, in every component, its first vertex as root."""
    best = g.n
    for order in itertools.permutations(range(g.n)):
        rank = {v: i for i, v in enumerate(order)}

        def height(verts):
            if not verts:
                return 0
            out = 0
            for comp in connected_components(g, verts):
                root = min(comp, key=rank.__getitem__)
                out = max(out, 1 + height([v for v in comp if v != root]))
            return out

        best = min(best, height(list(range(g.n))))
    return best


class TestGraph:
    def test_rejects_loops_and_parallel_edges(self):
        with pytest.raises(InputError):
            Graph(3, [(1, 1)])
        with pytest.raises(InputError):
            Graph(3, [(0, 1), (1, 0)])
        with pytest.raises(InputError):
            Graph(2, [(0, 2)])

    def test_adjacency_is_symmetric_and_sorted(self):
        g = Graph(4, [(2, 0), (0, 1), (3, 0)])
        assert g.adjacency == ((1, 2, 3), (0,), (0,), (0,))
        assert g.edges == ((0, 1), (0, 2), (0, 3))

    def test_immutable(self):
        g = path(3)
        with pytest.raises(AttributeError):
            g.n = 5


class TestComponents:
    def test_examples(self):
        g = path(3)
        assert connected_components(g, [0, 2]) == [(0,), (2,)]
        assert connected_components(g, [0, 1, 2]) == [(0, 1, 2)]
        assert connected_components(g, []) == []

    def test_invalid_vertex(self):
        with pytest.raises(InputError):
            connected_components(path(3), [5])
        with pytest.raises(InputError):
            connected_components(path(3), [1, 1])

    @settings(max_examples=150, deadline=None)
    @given(graphs(), st.data())
    def test_partition_property(self, g, data):
        s = data.draw(st.lists(st.integers(0, max(g.n - 1, 0)), unique=True)) if g.n else []
        comps = connected_components(g, s)
        flat = [v for c in comps for v in c]
        assert sorted(flat) == sorted(s)
        assert [min(c) for c in comps] == sorted(min(c) for c in comps)
        owner = {v: i for i, c in enumerate(comps) for v in c}
        for c in comps:
            assert is_connected(g, c)
        for u, v in g.edges:
            if u in owner and v in owner:
                assert owner[u] == owner[v]


class TestSubdivide:
    def test_triangle(self):
        h = subdivide(clique(3), 2)
        assert (h.n, h.m) == (9, 9)
        assert h.labels == (ROOT,) * 3 + (FRESH,) * 6

    def test_identity_case(self):
        h = subdivide(path(2), 0)
        assert h.edges == ((0, 1),)
        assert h.labels == (ROOT, ROOT)

    def test_family_member(self):
        # G_{1,1} with base size 2 has 6 vertices and 4 edges; 6 + 4*6 and 4*7
        h = subdivide(debski_graph(FamilyParams(1, 1, 2)), 6)
        assert (h.n, h.m) == (30, 28)

    def test_layout_and_origin(self):
        h = subdivide(path(3), 2)
        assert h.edges == ((0, 3), (1, 4), (1, 5), (2, 6), (3, 4), (5, 6))
        assert h.origin == {3: ((0, 1), 1), 4: ((0, 1), 2), 5: ((1, 2), 1), 6: ((1, 2), 2)}

    def test_labeled_input_rejected(self):
        with pytest.raises(InputError):
            subdivide(subdivide(path(2), 1), 1)

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=7), st.integers(0, 6))
    def test_closed_forms(self, g, s):
        h = subdivide(g, s)
        assert h.n == g.n + s * g.m
        assert h.m == (s + 1) * g.m
        for v in h.fresh():
            assert h.degree(v) == 2


class TestTreedepth:
    def test_examples(self):
        assert treedepth_exact(Graph(1, [])) == 1
        assert treedepth_exact(path(3)) == 2
        assert treedepth_exact(path(7)) == 3

    @pytest.mark.parametrize("n", range(1, 13))
    def test_paths_closed_form(self, n):
        assert treedepth_exact(path(n)) == math.ceil(math.log2(n + 1))

    @pytest.mark.parametrize("n", range(1, 8))
    def test_paths_against_elimination_orders(self, n):
        assert treedepth_exact(path(n)) == elimination_order_treedepth(path(n))

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=6))
    def test_random_against_elimination_orders(self, g):
        assert treedepth_exact(g) == elimination_order_treedepth(g)

    def test_known_values(self):
        assert treedepth_exact(clique(5)) == 5
        assert treedepth_exact(star(6)) == 2
        assert treedepth_exact(cycle(6)) == 1 + treedepth_exact(path(5))
        assert treedepth_exact(edgeless(4)) == 1

    def test_limit(self):
        with pytest.raises(OracleLimitError):
            treedepth_exact(path(13))
        assert treedepth_exact(path(13), limit=13) == 4


def test_max_degree():
    assert max_degree(clique(4)) == 3
    assert max_degree(edgeless(5)) == 0
    assert max_degree(star(5)) == 5


def test_induced_subgraph_keeps_labels():
    h = subdivide(path(3), 1)
    sub, verts = induced_subgraph(h, [4, 1, 3])
    assert verts == (1, 3, 4)
    assert sub.edges == ((0, 1), (0, 2))
    assert sub.labels == (ROOT, FRESH, FRESH)


class TestSerialization:
    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.integers(0, 3))
    def test_json_round_trip(self, g, s):
        for h in (g, subdivide(g, s)):
            text = graph_to_json(h)
            back = graph_from_json(text)
            assert back == h
            assert graph_to_json(back) == text

    def test_json_layout(self):
        assert graph_to_json(path(3)) == '{"edges":[[0,1],[1,2]],"n":3}\n'

    def test_bad_json(self):
        with pytest.raises(InputError):
            graph_from_json("{")
        with pytest.raises(InputError):
            graph_from_json('{"n": 2}')

    def test_dot_shapes(self):
        dot = graph_to_dot(subdivide(path(2), 1))
        assert "0 [shape=circle];" in dot
        assert "2 [shape=point];" in dot
        assert dot == graph_to_dot(subdivide(path(2), 1))
