"""
Tests for the graph core and BFS metric primitives
"""

import math

import numpy as np
import pytest

from geomt.errors import GraphFormatError, InputError
from geomt.graph import (
    Graph,
    GraphFamily,
    OrientedEdge,
    all_pairs_distances,
    ball,
    bfs_distances,
    bfs_tree,
    bounded_distance,
    connected_components,
    is_connected,
    max_degree,
)


def test_edges_are_canonical_and_sorted():
    """Test that edges are stored as (min, max) in sorted order"""
    g = Graph(4, [(3, 2), (1, 0), (2, 0)])
    assert g.edges == ((0, 1), (0, 2), (2, 3))
    assert g.adjacency[0] == (1, 2)
    assert g.edge_index(2, 0) == 1


def test_rejects_loops_duplicates_and_out_of_range():
    """Test graph construction validation"""
    with pytest.raises(GraphFormatError, match="loop"):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphFormatError, match="duplicate"):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphFormatError, match="out of range"):
        Graph(3, [(0, 3)])
    with pytest.raises(InputError, match="non-negative"):
        Graph(-1)


def test_edge_index_of_non_edge(square):
    """Test that asking for a missing edge is an input error"""
    with pytest.raises(InputError, match="not an edge"):
        square.edge_index(0, 2)


def test_oriented_edge_canonical():
    """Test oriented edge canonical form and reversal"""
    assert OrientedEdge(3, 1).canonical() == ((1, 3), -1)
    assert OrientedEdge(1, 3).reversed() == OrientedEdge(3, 1)
    with pytest.raises(InputError, match="loop"):
        OrientedEdge(2, 2)


def test_bfs_parents_prefer_smallest_predecessor(square):
    """Test BFS distances and smallest-index parents on the 4-cycle"""
    dist, parent = bfs_tree(square, 0)
    assert dist.tolist() == [0, 1, 2, 1]
    assert parent == [-1, 0, 1, 0]


def test_distances_on_disconnected_graph():
    """Test that unreachable vertices are at infinite distance"""
    g = Graph(4, [(0, 1), (2, 3)])
    dist = all_pairs_distances(g)
    assert dist[0, 1] == 1
    assert math.isinf(dist[0, 2])
    assert bfs_distances(g, 3).tolist()[2:] == [1, 0]
    assert math.isinf(bfs_distances(g, 3)[0])
    assert connected_components(g) == [[0, 1], [2, 3]]
    assert not is_connected(g)


def test_bounded_distance(path4):
    """Test distance lookups cut off at the limit"""
    assert bounded_distance(path4.adjacency, 0, 3, 3) == 3
    assert math.isinf(bounded_distance(path4.adjacency, 0, 3, 2))
    assert bounded_distance(path4.adjacency, 2, 2, 0) == 0


def test_ball_and_induced_subgraph(petersen):
    """Test that the radius-1 ball in the Petersen graph is a star"""
    local, vertex_map = ball(petersen, 0, 1)
    assert vertex_map == [0, 1, 4, 5]
    assert local.edge_count == 3
    assert max_degree(local) == 3


def test_remove_edges(square):
    """Test edge removal in either orientation"""
    rest = square.remove_edges([(1, 0)])
    assert rest.edge_count == 3
    assert not rest.has_edge(0, 1)


def test_family_sequence_must_grow():
    """Test that a sequence family needs non-decreasing sizes"""
    family = GraphFamily.of([Graph(2, [(0, 1)]), Graph(3)])
    assert [m.label for m in family] == ["0", "1"]
    with pytest.raises(InputError, match="non-decreasing"):
        GraphFamily(list(GraphFamily.of([Graph(3), Graph(2)])), sequence=True)


def test_equality_and_hash():
    """Test value semantics of graphs"""
    a = Graph(3, [(0, 1), (1, 2)])
    b = Graph(3, [(2, 1), (1, 0)])
    assert a == b and hash(a) == hash(b)
    assert np.array_equal(all_pairs_distances(a), all_pairs_distances(b))
