"""
Property tests over random graphs
"""

import networkx as nx
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from geomt.constructions import girth
from geomt.cost import coarse_distortion, max_short_cycle_free_subgraph
from geomt.cycles import (
    PhaseFunction,
    bridges,
    cycle_space_dim,
    cycle_vector,
    fundamental_cycles,
    nice_cycle_vector,
    short_cycle_rank,
)
from geomt.graph import Graph, bounded_distance, connected_components
from geomt.io import parse_graph, serialize_graph
from geomt.linalg import rational_rank
from geomt.spectral import laplacian, spectrum, twisted_laplacian
from graphs import random_connected


@st.composite
def simple_graphs(draw, max_vertices=10):
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph(n, edges)


connected_graphs = st.builds(
    random_connected,
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=3, max_value=80),
    st.integers(min_value=0, max_value=120),
)


@settings(deadline=None)
@given(simple_graphs())
def test_serialize_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


@settings(deadline=None)
@given(simple_graphs())
def test_zero_eigenvalues_count_components(g):
    m = laplacian(g).toarray()
    assert not m.sum(axis=1).any()
    assert spectrum(laplacian(g)).zero_multiplicity == len(connected_components(g))


@settings(deadline=None)
@given(simple_graphs())
def test_bridges_agree_with_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    assert bridges(g).bridges == sorted(tuple(sorted(e)) for e in nx.bridges(h))


@settings(deadline=None)
@given(simple_graphs())
def test_fundamental_cycles_have_full_rank(g):
    vectors = [cycle_vector(g, c) for c in fundamental_cycles(g)]
    assert len(vectors) == cycle_space_dim(g)
    assert rational_rank(vectors, g.edge_count) == cycle_space_dim(g)


@settings(deadline=None)
@given(simple_graphs(), st.integers(min_value=3, max_value=6))
def test_short_cycle_rank_is_bounded(g, R):
    assert 0 <= short_cycle_rank(g, R).rank <= cycle_space_dim(g)


@settings(max_examples=200, deadline=None)
@given(connected_graphs, st.integers(min_value=0, max_value=100))
def test_nice_cycle_vector_properties(g, seed):
    v = nice_cycle_vector(g, seed)
    assert v.is_unit()
    assert v.is_divergence_free(g)
    assert 2 * len(v.support) >= bridges(g).non_bridge_count


@settings(max_examples=50, deadline=None)
@given(connected_graphs, st.floats(min_value=-3, max_value=3), st.integers(min_value=0, max_value=100))
def test_twisted_laplacian_is_positive(g, t, seed):
    rng = np.random.default_rng(seed)
    rho = PhaseFunction({e: float(x) for e, x in zip(g.edges, rng.standard_normal(g.edge_count))})
    assert min(spectrum(twisted_laplacian(g, rho, t)).eigenvalues) >= -1e-9


@settings(max_examples=50, deadline=None)
@given(connected_graphs, st.integers(min_value=3, max_value=6), st.integers(min_value=0, max_value=100))
def test_greedy_subgraph_is_maximal(g, R, seed):
    Y = max_short_cycle_free_subgraph(g, R, seed)
    assert girth(Y) > R
    for u, v in g.edges:
        if not Y.has_edge(u, v):
            assert bounded_distance(Y.adjacency, u, v, R - 1) <= R - 1
    assert coarse_distortion(g, Y).L <= R - 1
