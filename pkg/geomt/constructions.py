"""
geomt graph generators: standard families, random regular graphs,
Margulis-type expanders and tree grafting
"""

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .errors import DisconnectedGraphError, InputError, InvariantViolation, RetriesExhausted
from .graph import Graph, is_connected, max_degree
from .utils import Edge, make_rng

logger = logging.getLogger(__name__)

STANDARD_KINDS = ("cycle", "path", "complete", "petersen", "star")
DEFAULT_REGULAR_ATTEMPTS = 1000


def gen_standard(kind: str, n: Optional[int] = None) -> Graph:
    """
    Named deterministic graphs

    star takes n leaves around hub 0; petersen ignores n.
    """
    if kind == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Graph(10, outer + spokes + inner)
    if kind not in STANDARD_KINDS:
        raise InputError(f"unknown graph kind {kind!r}; expected one of {STANDARD_KINDS}")
    if n is None:
        raise InputError(f"kind {kind!r} needs n")

    if kind == "cycle":
        if n < 3:
            raise InputError(f"a cycle needs n >= 3, got {n}")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "path":
        if n < 1:
            raise InputError(f"a path needs n >= 1, got {n}")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "complete":
        if n < 1:
            raise InputError(f"a complete graph needs n >= 1, got {n}")
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if n < 1:
        raise InputError(f"a star needs at least one leaf, got {n}")
    return Graph(n + 1, [(0, i) for i in range(1, n + 1)])


def gen_random_regular(n: int, d: int, seed: int = 0, max_attempts: int = DEFAULT_REGULAR_ATTEMPTS) -> Graph:
    """
    Simple d-regular graph from the pairing model

    Stubs are shuffled and paired; pairs that would make a loop or a
    repeated edge go back into the pool and are re-paired until the pool
    empties or no valid pair remains, in which case the attempt restarts.
    """
    if (n * d) % 2:
        raise InputError(f"n * d must be even, got n={n}, d={d}")
    if not 0 <= d < n:
        raise InputError(f"need 0 <= d < n, got n={n}, d={d}")
    rng = make_rng(seed)

    for attempt in range(1, max_attempts + 1):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            logger.debug("random %d-regular graph on %d vertices after %d attempts", d, n, attempt)
            return Graph(n, edges)
    raise RetriesExhausted(f"no simple {d}-regular graph on {n} vertices after {max_attempts} attempts")


def _try_pairing(n: int, d: int, rng) -> Optional[set]:
    edges = set()
    stubs = [x for x in range(n) for _ in range(d)]
    while stubs:
        leftover: Counter = Counter()
        rng.shuffle(stubs)
        pairs = iter(stubs)
        for s1, s2 in zip(pairs, pairs):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1
        if not _pairable(edges, leftover):
            return None
        stubs = [x for x, count in sorted(leftover.items()) for _ in range(count)]
    return edges


def _pairable(edges: set, leftover: Counter) -> bool:
    if not leftover:
        return True
    nodes = sorted(leftover)
    return any((a, b) not in edges for i, a in enumerate(nodes) for b in nodes[i + 1:])


@dataclass
class MargulisSimplification:
    n: int
    multigraph_edges: int
    loops_dropped: int
    parallel_dropped: int

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _margulis_images(x: int, y: int, n: int) -> List[Tuple[int, int]]:
    # forward maps only; the inverses give the same undirected edges
    return [
        ((x + y) % n, y),
        ((x + y + 1) % n, y),
        (x, (y + x) % n),
        (x, (y + x + 1) % n),
    ]


def margulis_simplification(n: int) -> Tuple[Graph, MargulisSimplification]:
    """
    Simple support of the 8-regular Margulis multigraph on (Z/n)^2

    Vertex (x, y) has id x*n + y. Returns the graph and the counts of loops
    and parallel copies dropped.
    """
    if n < 2:
        raise InputError(f"Margulis construction needs n >= 2, got {n}")
    multiset: Counter = Counter()
    loops = 0
    for x in range(n):
        for y in range(n):
            a = x * n + y
            for (u, v) in _margulis_images(x, y, n):
                b = u * n + v
                if a == b:
                    loops += 1
                else:
                    multiset[(min(a, b), max(a, b))] += 1
    parallel = sum(multiset.values()) - len(multiset)
    report = MargulisSimplification(n, 4 * n * n, loops, parallel)
    return Graph(n * n, multiset), report


def gen_margulis(n: int) -> Graph:
    return margulis_simplification(n)[0]


@dataclass
class GraftSpec:
    base: Graph
    depth: int
    root: int

    @property
    def leaf_count(self) -> int:
        return 3 * 2 ** (self.depth - 1)

    @property
    def tree_size(self) -> int:
        return 3 * 2 ** self.depth - 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base_vertices": self.base.vertex_count,
            "depth": self.depth,
            "root": self.root,
            "leaves": self.leaf_count,
            "tree_vertices": self.tree_size,
        }


def graft_tree(Y: Graph, R: int) -> Tuple[Graph, GraftSpec]:
    """
    Attach a depth-R rooted tree to Y

    The root (id |V(Y)|) has three children and every other internal vertex
    two, so all non-leaves have degree 3. Leaf i is joined to Y's vertex i;
    Y keeps its vertex ids.
    """
    if R < 1:
        raise InputError(f"graft depth must be at least 1, got {R}")
    n = Y.vertex_count
    leaves_needed = 3 * 2 ** (R - 1)
    if leaves_needed > n:
        raise InputError(f"tree of depth {R} has {leaves_needed} leaves but the base has only {n} vertices")
    if not is_connected(Y):
        raise DisconnectedGraphError("graft base must be connected")

    root = n
    next_id = n + 1
    edges: List[Edge] = list(Y.edges)
    level = [root]
    for _ in range(R):
        children = []
        for parent in level:
            for _ in range(3 if parent == root else 2):
                edges.append((parent, next_id))
                children.append(next_id)
                next_id += 1
        level = children

    for i, leaf in enumerate(level):
        edges.append((i, leaf))

    X = Graph(next_id, edges)
    spec = GraftSpec(Y, R, root)
    if max_degree(X) > max_degree(Y) + 1:
        raise InvariantViolation(f"grafted max degree {max_degree(X)} exceeds {max_degree(Y) + 1}")
    return X, spec


def girth(g: Graph) -> float:
    """Shortest cycle length by BFS from every vertex; inf for forests"""
    best = math.inf
    adjacency = g.adjacency
    for s in range(g.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best
