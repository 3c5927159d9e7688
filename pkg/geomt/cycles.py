"""
geomt cycle spaces: bridges, short cycles and their exact rank, divergence-free
{-1,0,1} edge functions, the edge set B killing the short-cycle space, and
phase functions orthogonal to all short cycles
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    CycleBudgetExceeded,
    DisconnectedGraphError,
    InputError,
    InvariantViolation,
    OddDegreeError,
    RetriesExhausted,
)
from .graph import Graph, OrientedEdge, bfs_tree, connected_components, is_connected
from .linalg import IntegerEchelon, SparseVector, combine, rational_rank, solve_rational
from .utils import Edge, edge_key, make_rng

logger = logging.getLogger(__name__)

DEFAULT_CYCLE_CAP = 1_000_000
DEFAULT_MAX_RETRIES = 64
Number = Union[int, float]
Cycle = Tuple[int, ...]


@dataclass
class EdgeFunction:
    """
    Antisymmetric function on oriented edges

    values[(u, v)] with u < v stores the value on u -> v; the value on
    v -> u is its negative. Every edge of the underlying graph has an entry.
    """

    values: Dict[Edge, Number]

    def value(self, x: int, y: int) -> Number:
        key, sign = edge_key(x, y)
        try:
            return sign * self.values[key]
        except KeyError:
            raise InputError(f"edge function has no value on ({x}, {y})") from None

    def value_on(self, edge: OrientedEdge) -> Number:
        return self.value(edge.tail, edge.head)

    @property
    def support(self) -> List[Edge]:
        return [e for e, value in sorted(self.values.items()) if value != 0]

    def divergence(self, g: Graph, x: int) -> Number:
        return sum(self.value(x, y) for y in g.neighbors(x))

    def inner(self, vector: Dict[Edge, int]) -> Number:
        """Standard inner product with an edge-keyed vector"""
        return sum(self.values[e] * c for e, c in vector.items())

    def to_list(self) -> List[Dict[str, Number]]:
        return [{"u": u, "v": v, "value": value} for (u, v), value in sorted(self.values.items())]


@dataclass
class CycleVector(EdgeFunction):
    """Integer-valued, divergence-free edge function"""

    def is_divergence_free(self, g: Graph) -> bool:
        return all(self.divergence(g, x) == 0 for x in range(g.vertex_count))

    def is_unit(self) -> bool:
        return all(value in (-1, 0, 1) for value in self.values.values())


@dataclass
class PhaseFunction(EdgeFunction):
    """
    Real edge function orthogonal to every cycle of length <= R

    Values off B agree with the source cycle vector; extend_rho fills a
    cache of shortest-path extensions, one BFS row per source vertex.
    """

    R: Optional[int] = None
    B: Tuple[Edge, ...] = ()
    _rows: Dict[int, np.ndarray] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edge_function(cls, source: EdgeFunction, R: Optional[int] = None) -> "PhaseFunction":
        return cls({e: float(v) for e, v in source.values.items()}, R=R)


@dataclass
class ShortCycleSet:
    R: int
    cycles: List[Cycle]
    rank: Optional[int] = None


@dataclass
class BridgeReport:
    bridges: List[Edge]
    non_bridge_count: int


@dataclass
class EdgeSelection:
    """
    Edges b_1..b_m (m = dim Z_R) with Z_R intersected with Z(X minus B) = 0

    certificates[j] is an element of Z_R vanishing on b_1..b_{j-1} whose
    support contains b_j; basis is the short-cycle basis the solver uses.
    """

    R: int
    B: List[Edge]
    certificates: List[Dict[Edge, int]]
    basis: List[Dict[Edge, int]]
    cycles: ShortCycleSet

    def to_dict(self) -> Dict[str, object]:
        return {
            "R": self.R,
            "B": [list(b) for b in self.B],
            "certificates": [
                [{"u": u, "v": v, "value": c} for (u, v), c in sorted(cert.items())] for cert in self.certificates
            ],
        }


def _edge_keyed(g: Graph, vec: SparseVector) -> Dict[Edge, int]:
    edges = g.edges
    return {edges[i]: c for i, c in vec.items()}


def bridges(g: Graph) -> BridgeReport:
    """
    Bridges by one iterative low-link DFS
    """
    n = g.vertex_count
    adjacency = g.adjacency
    disc = [-1] * n
    low = [0] * n
    timer = 0
    found: List[Edge] = []

    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adjacency[root]))]
        while stack:
            x, parent, neighbours = stack[-1]
            descended = False
            for y in neighbours:
                if y == parent:
                    continue
                if disc[y] == -1:
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, x, iter(adjacency[y])))
                    descended = True
                    break
                low[x] = min(low[x], disc[y])
            if descended:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[x])
                if low[x] > disc[p]:
                    found.append((min(p, x), max(p, x)))

    found.sort()
    return BridgeReport(found, g.edge_count - len(found))


def cycle_space_dim(g: Graph) -> int:
    return g.edge_count - g.vertex_count + len(connected_components(g))


def cycle_vector(g: Graph, cycle: Sequence[int]) -> SparseVector:
    """Signed incidence vector (edge index -> +-1) of a closed simple cycle"""
    vec: SparseVector = {}
    k = len(cycle)
    for i in range(k):
        (key, sign) = edge_key(cycle[i], cycle[(i + 1) % k])
        idx = g.edge_index(*key)
        vec[idx] = vec.get(idx, 0) + sign
    return {i: c for i, c in vec.items() if c}


def fundamental_cycles(g: Graph) -> List[Cycle]:
    """
    Fundamental cycles of a BFS spanning forest, one per non-tree edge

    Each cycle runs u -> ... -> lca -> ... -> v and closes with v -> u.
    """
    n = g.vertex_count
    depth = [0] * n
    parent = [-1] * n
    for comp in connected_components(g):
        dist, par = bfs_tree(g, comp[0])
        for x in comp:
            depth[x] = int(dist[x])
            parent[x] = par[x]

    cycles: List[Cycle] = []
    for u, v in g.edges:
        if parent[u] == v or parent[v] == u:
            continue
        up_u, up_v = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            up_u.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            up_v.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            up_u.append(a)
            up_v.append(b)
        cycles.append(tuple(up_u + up_v[-2::-1]))
    return cycles


def short_cycles(g: Graph, R: int, cap: int = DEFAULT_CYCLE_CAP) -> ShortCycleSet:
    """
    All simple cycles of length <= R, each exactly once

    A cycle is listed from its smallest vertex, in the direction whose second
    vertex is smaller than its last. Exceeding cap raises instead of
    truncating.
    """
    if R < 3:
        raise InputError(f"R must be at least 3, got {R}")
    n = g.vertex_count
    adjacency = g.adjacency
    cycles: List[Cycle] = []

    for s in range(n):
        # distances back to s inside the vertices >= s, for pruning
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if dist[x] >= R // 2 + 1:
                continue
            for y in adjacency[x]:
                if y > s and y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)

        path = [s]
        on_path = {s}

        def extend(x: int) -> None:
            for y in adjacency[x]:
                if y == s:
                    if len(path) >= 3 and path[1] < path[-1]:
                        cycles.append(tuple(path))
                        if len(cycles) > cap:
                            raise CycleBudgetExceeded(cap, R)
                elif y > s and y not in on_path and len(path) < R:
                    back = dist.get(y)
                    if back is None or len(path) + back > R:
                        continue
                    path.append(y)
                    on_path.add(y)
                    extend(y)
                    path.pop()
                    on_path.discard(y)

        extend(s)

    logger.debug("enumerated %d cycles of length <= %d", len(cycles), R)
    return ShortCycleSet(R, cycles)


def short_cycle_rank(g: Graph, R: int, cap: int = DEFAULT_CYCLE_CAP) -> ShortCycleSet:
    """short_cycles plus the exact rational dimension of their span"""
    found = short_cycles(g, R, cap)
    vectors = [cycle_vector(g, c) for c in found.cycles]
    found.rank = rational_rank(vectors, g.edge_count, upper_bound=cycle_space_dim(g))
    return found


def eulerian_orientation(g: Graph) -> CycleVector:
    """
    Orient every edge along an Eulerian circuit of its component (Hierholzer)

    Returns a +-1 cycle vector with full support and zero divergence.
    """
    for x in range(g.vertex_count):
        if g.degree(x) % 2:
            raise OddDegreeError(x, g.degree(x))

    adjacency = g.adjacency
    used = [False] * g.edge_count
    pointer = [0] * g.vertex_count
    values: Dict[Edge, int] = {e: 0 for e in g.edges}

    for start in range(g.vertex_count):
        stack = [start]
        circuit = []
        while stack:
            x = stack[-1]
            nbrs = adjacency[x]
            while pointer[x] < len(nbrs) and used[g.edge_index(x, nbrs[pointer[x]])]:
                pointer[x] += 1
            if pointer[x] < len(nbrs):
                y = nbrs[pointer[x]]
                used[g.edge_index(x, y)] = True
                stack.append(y)
            else:
                circuit.append(stack.pop())
        circuit.reverse()
        for a, b in zip(circuit, circuit[1:]):
            key, sign = edge_key(a, b)
            values[key] = sign

    return CycleVector(values)


def _orient_subgraph(g: Graph, edge_indices: Iterable[int]) -> CycleVector:
    """Eulerian orientation of the even subgraph (V, E'), zero elsewhere"""
    sub = Graph(g.vertex_count, (g.edges[i] for i in edge_indices))
    oriented = eulerian_orientation(sub)
    values: Dict[Edge, int] = {e: 0 for e in g.edges}
    values.update(oriented.values)
    return CycleVector(values)


def nice_cycle_vector(g: Graph, seed: int = 0, max_retries: int = DEFAULT_MAX_RETRIES) -> CycleVector:
    """
    {-1,0,1}-valued divergence-free v, nonzero on at least half the non-bridges

    Random 0/1 combinations w of fundamental cycles are drawn until the edges
    with odd w cover half of the non-bridge edges; those edges form an even
    subgraph whose Eulerian circuits give v.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("nice cycle vector needs a connected graph")

    non_bridges = bridges(g).non_bridge_count
    vectors = [cycle_vector(g, c) for c in fundamental_cycles(g)]
    rng = make_rng(seed)

    best: Optional[np.ndarray] = None
    for attempt in range(1, max_retries + 1):
        choice = rng.integers(0, 2, size=len(vectors))
        w = np.zeros(g.edge_count, dtype=np.int64)
        for i in np.flatnonzero(choice):
            for idx, c in vectors[i].items():
                w[idx] += c
        odd = np.flatnonzero(w % 2)
        if best is None or odd.size > best.size:
            best = odd
        if 2 * odd.size >= non_bridges:
            logger.debug("nice cycle vector: attempt %d covers %d of %d non-bridges", attempt, odd.size, non_bridges)
            return _orient_subgraph(g, odd)

    raise RetriesExhausted(
        f"no half-covering cycle combination in {max_retries} attempts",
        best=_orient_subgraph(g, best) if best is not None else None,
    )


def select_B(g: Graph, R: int, cap: int = DEFAULT_CYCLE_CAP) -> EdgeSelection:
    """
    Choose b_1..b_m, m = dim Z_R, with b_j in the support of an element of
    Z_R vanishing on b_1..b_{j-1}

    A basis of the current intersection is kept in integer echelon form;
    each step takes the first basis element, removes its smallest support
    edge and eliminates that edge from the remaining elements.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("select_B needs a connected graph")

    found = short_cycles(g, R, cap)
    bound = cycle_space_dim(g)
    echelon = IntegerEchelon()
    basis: List[SparseVector] = []
    for cycle in found.cycles:
        vec = cycle_vector(g, cycle)
        if echelon.add(vec):
            basis.append(vec)
            if echelon.rank == bound:
                break
    found.rank = len(basis)

    remaining = [dict(vec) for vec in basis]
    chosen: List[int] = []
    certificates: List[SparseVector] = []
    while remaining:
        w = remaining.pop(0)
        col = min(w)
        chosen.append(col)
        certificates.append(w)
        remaining = [combine(w, u, col) if u.get(col) else u for u in remaining]

    selection = EdgeSelection(
        R=R,
        B=[g.edges[i] for i in chosen],
        certificates=[_edge_keyed(g, c) for c in certificates],
        basis=[_edge_keyed(g, b) for b in basis],
        cycles=found,
    )
    _verify_selection(g, selection, basis)
    return selection


def _verify_selection(g: Graph, selection: EdgeSelection, basis: List[SparseVector]) -> None:
    rest = g.remove_edges(selection.B)
    if not is_connected(rest):
        raise InvariantViolation("graph minus B is disconnected")
    rest_cycles = [cycle_vector(g, c) for c in fundamental_cycles(rest)]
    expected = len(basis) + cycle_space_dim(rest)
    got = rational_rank(basis + rest_cycles, g.edge_count, upper_bound=cycle_space_dim(g))
    if got != expected:
        raise InvariantViolation(f"short cycles meet the cycle space of X minus B (rank {got} != {expected})")


def solve_rho(
    g: Graph,
    R: int,
    v: EdgeFunction,
    selection: EdgeSelection,
    tol: float = 1e-9,
) -> PhaseFunction:
    """
    The unique rho orthogonal to Z_R with rho = v off B

    One equation per short-cycle basis element in the |B| unknowns rho(b).
    Integer data is solved exactly over Q; real data with numpy.
    """
    B = list(selection.B)
    unknown = set(B)
    rho: Dict[Edge, float] = {e: float(v.values[e]) for e in g.edges if e not in unknown}

    if B:
        matrix = [[z.get(b, 0) for b in B] for z in selection.basis]
        rhs = [-sum(c * v.values[e] for e, c in z.items() if e not in unknown) for z in selection.basis]
        if all(float(value).is_integer() for value in v.values.values()):
            solution = [float(x) for x in solve_rational(matrix, [Fraction(int(r)) for r in rhs])]
        else:
            try:
                solution = np.linalg.solve(np.array(matrix, dtype=float), np.array(rhs, dtype=float)).tolist()
            except np.linalg.LinAlgError:
                raise InvariantViolation("singular system for rho: B violates its invariants") from None
        rho.update(zip(B, solution))

    phase = PhaseFunction({e: rho[e] for e in g.edges}, R=R, B=tuple(B))

    residual = max((abs(phase.inner(_edge_keyed(g, cycle_vector(g, c)))) for c in selection.cycles.cycles), default=0.0)
    if residual > tol:
        raise InvariantViolation(f"rho is not orthogonal to the short cycles (residual {residual:.3e})")
    return phase


def _extension_row(g: Graph, rho: PhaseFunction, x: int) -> np.ndarray:
    row = rho._rows.get(x)
    if row is None:
        dist, parent = bfs_tree(g, x)
        row = np.full(g.vertex_count, np.nan)
        row[x] = 0.0
        for y in np.argsort(dist, kind="stable"):
            y = int(y)
            if y == x or not np.isfinite(dist[y]):
                continue
            p = parent[y]
            row[y] = row[p] + rho.value(p, y)
        rho._rows[x] = row
    return row


def extend_rho(g: Graph, rho: PhaseFunction, pairs: Iterable[Tuple[int, int]]) -> List[float]:
    """
    rho(x, y) as the sum of edge values along a fixed shortest path

    The path for (x, y) with x < y follows BFS parents from x; the path for
    (y, x) is its reverse, so rho(y, x) = -rho(x, y) exactly.
    """
    out = []
    for x, y in pairs:
        if x == y:
            out.append(0.0)
            continue
        lo, hi = (x, y) if x < y else (y, x)
        value = _extension_row(g, rho, lo)[hi]
        if np.isnan(value):
            raise DisconnectedGraphError(f"vertices {x} and {y} lie in different components")
        out.append(float(value) if x < y else -float(value))
    return out


def extension_table(g: Graph, rho: PhaseFunction) -> np.ndarray:
    """All-pairs extended phases; NaN between components"""
    n = g.vertex_count
    table = np.full((n, n), np.nan)
    for x in range(n):
        row = _extension_row(g, rho, x)
        table[x, x] = 0.0
        table[x, x + 1:] = row[x + 1:]
        table[x + 1:, x] = -row[x + 1:]
    return table
