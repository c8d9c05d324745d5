import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcontext.exceptions import CapabilityError
from qcontext.graphs import (
    SimpleGraph,
    collinearity_graph,
    complete_bipartite,
    coxeter_graph,
    graphs_isomorphic,
    haar_graph,
    heawood_graph,
    incidence_graph,
    point_hyperplane_graph,
)

# Heawood graph as the incidence graph of the Fano plane {i, i+1, i+3 mod 7}
FANO_INCIDENCE = [(i, 7 + j) for j in range(7) for i in ((j) % 7, (j + 1) % 7, (j + 3) % 7)]


def random_relabel(g, seed):
    return g.relabel(np.random.default_rng(seed).permutation(g.n_vertices))


class TestSimpleGraph:
    def test_rejects_loops_and_repeats(self):
        with pytest.raises(ValueError):
            SimpleGraph.from_edges(3, [(1, 1)])
        with pytest.raises(ValueError):
            SimpleGraph.from_edges(3, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            SimpleGraph.from_edges(2, [(0, 2)])

    def test_adjacency_symmetric(self):
        A = coxeter_graph().adjacency()
        assert np.array_equal(A, A.T) and not A.diagonal().any()


class TestReferences:
    def test_coxeter_invariants(self):
        g = coxeter_graph()
        assert (g.n_vertices, g.n_edges, g.girth()) == (28, 42, 7)
        assert g.is_regular(3) and not g.is_bipartite()

    def test_heawood_invariants(self):
        g = heawood_graph()
        assert (g.n_vertices, g.n_edges, g.girth()) == (14, 21, 6)
        assert g.is_regular(3) and g.is_bipartite()
        assert graphs_isomorphic(g, SimpleGraph.from_edges(14, FANO_INCIDENCE))

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_point_hyperplane_shape(self, d):
        g = point_hyperplane_graph(d)
        assert g.n_vertices == 2 * (2 ** (d + 1) - 1)
        assert g.is_regular(2**d - 1) and g.is_bipartite()

    def test_pg2_is_heawood(self):
        g = point_hyperplane_graph(2)
        assert g.girth() == 6
        assert graphs_isomorphic(g, heawood_graph())

    def test_haar_69_is_heawood(self):
        assert graphs_isomorphic(haar_graph(69), point_hyperplane_graph(2))

    def test_haar_4_is_a_matching(self):
        g = haar_graph(4)
        assert g.n_vertices == 6 and g.n_edges == 3 and g.is_regular(1)

    def test_pg3_is_haar_17051(self):
        g = point_hyperplane_graph(3)
        assert (g.n_vertices, g.n_edges) == (30, 105)
        assert graphs_isomorphic(g, haar_graph(17051))

    @pytest.mark.parametrize("n", [1, 5, 69, 255, 1000])
    def test_haar_degree_is_popcount(self, n):
        g = haar_graph(n)
        assert g.is_regular(bin(n).count("1"))

    def test_complete_bipartite(self):
        g = complete_bipartite(7, 7)
        assert (g.n_vertices, g.n_edges) == (14, 49) and g.is_regular(7)

    @pytest.mark.parametrize("bad", [0, -3])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            haar_graph(bad)
        with pytest.raises(ValueError):
            point_hyperplane_graph(bad)


class TestIsomorphism:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_relabelled_coxeter(self, seed):
        g = coxeter_graph()
        assert graphs_isomorphic(random_relabel(g, seed), random_relabel(g, seed + 1))

    def test_heawood_vs_k77(self):
        assert not graphs_isomorphic(heawood_graph(), complete_bipartite(7, 7))

    def test_same_degrees_different_graphs(self):
        # two cubic graphs on 28 vertices: Coxeter versus the prism over a 14-cycle
        ladder = SimpleGraph.from_edges(28, [(i, (i + 1) % 14) for i in range(14)]
                                        + [(14 + i, 14 + (i + 1) % 14) for i in range(14)]
                                        + [(i, 14 + i) for i in range(14)])
        assert ladder.is_regular(3)
        assert not graphs_isomorphic(coxeter_graph(), ladder)

    def test_symmetric_and_reflexive(self):
        a, b = haar_graph(69), heawood_graph()
        assert graphs_isomorphic(a, a)
        assert graphs_isomorphic(a, b) == graphs_isomorphic(b, a)

    def test_size_cap(self):
        big = SimpleGraph.from_edges(300, [(i, i + 1) for i in range(299)])
        with pytest.raises(CapabilityError):
            graphs_isomorphic(big, big)


class TestIncidence:
    def test_incidence_graph_of_fano(self):
        lines = [((j) % 7, (j + 1) % 7, (j + 3) % 7) for j in range(7)]
        g, pts = incidence_graph(lines)
        assert pts.tolist() == list(range(7))
        assert graphs_isomorphic(g, heawood_graph())

    def test_collinearity_of_fano_is_complete(self):
        lines = [((j) % 7, (j + 1) % 7, (j + 3) % 7) for j in range(7)]
        g, _ = collinearity_graph(lines)
        assert g.n_edges == 21
