"""
Tests for graph generators, grafting and girth
"""

import math

import pytest

from geomt.constructions import (
    gen_margulis,
    gen_random_regular,
    gen_standard,
    girth,
    graft_tree,
    margulis_simplification,
)
from geomt.cycles import short_cycles
from geomt.errors import DisconnectedGraphError, InputError
from geomt.graph import Graph, ball, is_connected, max_degree
from geomt.spectral import laplacian, spectrum


@pytest.mark.parametrize(
    "kind, n, vertices, edges",
    [("cycle", 4, 4, 4), ("path", 4, 4, 3), ("complete", 4, 4, 6), ("star", 4, 5, 4), ("petersen", None, 10, 15)],
)
def test_standard_graphs(kind, n, vertices, edges):
    """Test sizes of the named graphs"""
    g = gen_standard(kind, n)
    assert (g.vertex_count, g.edge_count) == (vertices, edges)


def test_standard_graph_errors():
    """Test unknown kinds and missing or small sizes"""
    with pytest.raises(InputError, match="unknown graph kind"):
        gen_standard("wheel", 5)
    with pytest.raises(InputError, match="needs n"):
        gen_standard("cycle")
    with pytest.raises(InputError, match="n >= 3"):
        gen_standard("cycle", 2)


def test_random_regular():
    """Test degrees and simplicity of a random cubic graph"""
    g = gen_random_regular(10, 3, seed=5)
    assert all(len(nbrs) == 3 for nbrs in g.adjacency)
    assert g.edge_count == 15


def test_random_regular_is_seeded():
    """Test identical output for a fixed seed"""
    assert gen_random_regular(100, 4, seed=2) == gen_random_regular(100, 4, seed=2)


def test_random_regular_errors():
    """Test parity and range checks"""
    with pytest.raises(InputError, match="even"):
        gen_random_regular(5, 3)
    with pytest.raises(InputError, match="0 <= d < n"):
        gen_random_regular(4, 4)


def test_margulis_small_case():
    """Test the simple support of the n = 2 multigraph: a 4-cycle"""
    g, report = margulis_simplification(2)
    assert g.vertex_count == 4
    assert g.edge_count == 4
    assert report.multigraph_edges == 16
    assert report.loops_dropped == 8
    assert report.parallel_dropped == 4


@pytest.mark.parametrize("n", [5, 7, 9])
def test_margulis_is_a_connected_expander(n):
    """Test connectivity, degree <= 8 and a positive gap"""
    g = gen_margulis(n)
    assert g.vertex_count == n * n
    assert is_connected(g)
    assert max_degree(g) <= 8
    assert spectrum(laplacian(g)).gap > 0.1


def test_margulis_counts_add_up():
    """Test loops + parallel copies + simple edges = 4 n^2"""
    g, report = margulis_simplification(6)
    assert report.loops_dropped + report.parallel_dropped + g.edge_count == 4 * 36


def test_minimal_graft(k4):
    """Test R = 1: a root with three leaves attached to the base"""
    X, spec = graft_tree(k4, 1)
    assert spec.root == 4
    assert spec.tree_size == 4
    assert X.vertex_count == 8
    assert X.edge_count == 6 + 3 + 3
    assert [X.has_edge(i, leaf) for i, leaf in zip(range(3), (5, 6, 7))] == [True] * 3


def test_graft_ball_is_cycle_free():
    """Test that the R-ball around the root of a graft on K_10 is a tree"""
    Y = gen_standard("complete", 10)
    X, spec = graft_tree(Y, 2)
    assert spec.leaf_count == 6
    local, _ = ball(X, spec.root, 2)
    assert is_connected(local) and local.edge_count == local.vertex_count - 1
    assert max_degree(X) <= max_degree(Y) + 1
    attached = sorted(x for x in range(10) if max(X.neighbors(x)) >= 10)
    assert attached == list(range(6))


def test_graft_errors(petersen):
    """Test depth, base size and connectivity checks"""
    with pytest.raises(InputError, match="at least 1"):
        graft_tree(petersen, 0)
    with pytest.raises(InputError, match="12 leaves"):
        graft_tree(petersen, 3)
    with pytest.raises(DisconnectedGraphError):
        graft_tree(Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)]), 1)


@pytest.mark.parametrize(
    "g, expected",
    [
        (gen_standard("path", 5), math.inf),
        (gen_standard("petersen"), 5),
        (gen_standard("complete", 4), 3),
        (gen_standard("cycle", 7), 7),
        (Graph(0), math.inf),
    ],
)
def test_girth(g, expected):
    """Test BFS girth on named graphs"""
    assert girth(g) == expected


def test_girth_agrees_with_short_cycles(petersen):
    """Test girth 5 against short-cycle enumeration"""
    assert short_cycles(petersen, 4).cycles == []
    assert short_cycles(petersen, 5).cycles
