"""
geomt graph core: simple undirected graphs, families, BFS metric primitives
Graphs are immutable; every operation here is a pure function of its inputs
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GraphFormatError, InputError
from .utils import Edge

UNREACHABLE = math.inf


@dataclass(frozen=True)
class OrientedEdge:
    """Edge (tail, head); (x, y) is read as -(y, x) by edge-function consumers"""

    tail: int
    head: int

    def __post_init__(self):
        if self.tail == self.head:
            raise InputError(f"oriented edge ({self.tail}, {self.head}) is a loop")

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.head, self.tail)

    def canonical(self) -> Tuple[Edge, int]:
        """((min, max), +1 or -1)"""
        if self.tail < self.head:
            return (self.tail, self.head), 1
        return (self.head, self.tail), -1


class Graph:
    """
    Simple undirected graph on vertices 0..vertex_count-1

    Edges are stored canonically as (u, v) with u < v, sorted; adjacency
    lists are sorted so every traversal is deterministic.
    """

    __slots__ = ("_n", "_edges", "_adjacency", "_edge_index")

    def __init__(self, vertex_count: int, edges: Iterable[Tuple[int, int]] = ()):
        if vertex_count < 0:
            raise InputError(f"vertex count must be non-negative, got {vertex_count}")
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)

        adjacency: List[List[int]] = [[] for _ in range(vertex_count)]
        for u, v in seen:
            adjacency[u].append(v)
            adjacency[v].append(u)

        self._n = vertex_count
        self._edges: Tuple[Edge, ...] = tuple(sorted(seen))
        self._adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        self._edge_index: Dict[Edge, int] = {e: i for i, e in enumerate(self._edges)}

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    def neighbors(self, x: int) -> Tuple[int, ...]:
        return self._adjacency[self._check_vertex(x)]

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._edge_index

    def edge_index(self, u: int, v: int) -> int:
        """Column index of the edge {u, v} in edge-space vectors"""
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_index[key]
        except KeyError:
            raise InputError(f"({u}, {v}) is not an edge") from None

    def remove_edges(self, removed: Iterable[Edge]) -> "Graph":
        drop = {(min(u, v), max(u, v)) for u, v in removed}
        return Graph(self._n, (e for e in self._edges if e not in drop))

    def induced_subgraph(self, vertices: Iterable[int]) -> Tuple["Graph", List[int]]:
        """
        Induced subgraph on the given vertices

        Returns:
            (subgraph, vertex_map) where vertex_map[i] is the original id of
            the subgraph's vertex i; vertices keep their relative order
        """
        vertex_map = sorted({self._check_vertex(x) for x in vertices})
        local = {x: i for i, x in enumerate(vertex_map)}
        sub_edges = [(local[u], local[v]) for u, v in self._edges if u in local and v in local]
        return Graph(len(vertex_map), sub_edges), vertex_map

    def _check_vertex(self, x: int) -> int:
        if not (0 <= x < self._n):
            raise InputError(f"vertex {x} out of range [0, {self._n})")
        return x

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self._n}, edge_count={len(self._edges)})"


@dataclass
class FamilyMember:
    label: str
    graph: Graph
    root: Optional[int] = None


@dataclass
class GraphFamily:
    """Ordered, labelled list of graphs modelling a sequence (X_n)"""

    members: List[FamilyMember] = field(default_factory=list)
    sequence: bool = False

    def __post_init__(self):
        if self.sequence:
            counts = [m.graph.vertex_count for m in self.members]
            if any(a > b for a, b in zip(counts, counts[1:])):
                raise InputError("family modelling a sequence must have non-decreasing vertex counts")

    @classmethod
    def of(cls, graphs: Sequence[Graph], labels: Optional[Sequence[str]] = None) -> "GraphFamily":
        labels = labels or [str(i) for i in range(len(graphs))]
        return cls([FamilyMember(label, g) for label, g in zip(labels, graphs)])

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def graphs(self) -> List[Graph]:
        return [m.graph for m in self.members]


def bfs_tree(g: Graph, source: int) -> Tuple[np.ndarray, List[int]]:
    """
    Breadth-first search from source

    Returns:
        (distances, parents): float distances with inf for unreachable
        vertices, and parent ids (-1 for the source and unreachable ones).
        Neighbours are scanned in ascending order, so each parent is the
        first-discovered, smallest-index predecessor.
    """
    adjacency = g.adjacency
    g._check_vertex(source)
    dist = np.full(g.vertex_count, UNREACHABLE)
    parent = [-1] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adjacency[x]:
            if dist[y] == UNREACHABLE:
                dist[y] = dx
                parent[y] = x
                queue.append(y)
    return dist, parent


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Shortest-path distances from source; inf on other components"""
    return bfs_tree(g, source)[0]


def all_pairs_distances(g: Graph) -> np.ndarray:
    """|V| x |V| distance matrix by one BFS per vertex"""
    return np.vstack([bfs_distances(g, x) for x in range(g.vertex_count)]) if g.vertex_count else np.zeros((0, 0))


def bounded_distance(adjacency: Sequence[Sequence[int]], u: int, v: int, limit: int) -> float:
    """
    d(u, v) if it is at most limit, else inf

    Works on any adjacency-list structure, so callers can grow a graph
    incrementally without rebuilding a Graph.
    """
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    for depth in range(1, limit + 1):
        nxt = []
        for x in frontier:
            for y in adjacency[x]:
                if y == v:
                    return depth
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return UNREACHABLE


def connected_components(g: Graph) -> List[List[int]]:
    """Maximal connected vertex sets, each sorted, ordered by smallest vertex"""
    label = [-1] * g.vertex_count
    components: List[List[int]] = []
    for start in range(g.vertex_count):
        if label[start] != -1:
            continue
        comp = [start]
        label[start] = len(components)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if label[y] == -1:
                    label[y] = label[start]
                    comp.append(y)
                    queue.append(y)
        components.append(sorted(comp))
    return components


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def ball(g: Graph, center: int, radius: int) -> Tuple[Graph, List[int]]:
    """
    Induced subgraph on {x : d(center, x) <= radius}

    Returns:
        (subgraph, vertex_map) as in Graph.induced_subgraph
    """
    if radius < 0:
        raise InputError(f"radius must be non-negative, got {radius}")
    dist = bfs_distances(g, center)
    return g.induced_subgraph(int(x) for x in np.flatnonzero(dist <= radius))


def max_degree(g: Graph) -> int:
    return max((len(nbrs) for nbrs in g.adjacency), default=0)
