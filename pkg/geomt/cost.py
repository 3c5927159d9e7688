"""
geomt cost bounds: maximal subgraphs without short cycles, coarse
distortion between two metrics on one vertex set, and approximate
isomorphism witnesses
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

import numpy as np

from .cycles import DEFAULT_CYCLE_CAP
from .errors import (
    DisconnectedGraphError,
    GraphTooLargeError,
    InputError,
    InvariantViolation,
    NotIsomorphicError,
)
from .graph import Graph, GraphFamily, all_pairs_distances, bounded_distance, is_connected, max_degree
from .utils import Edge, make_rng, ratio
from .witnesses import cycle_density_check

logger = logging.getLogger(__name__)

ALL_PAIRS_CAP = 2000
CSV_COLUMNS = ["n", "label", "vertices", "edges_x", "edges_y", "ratio_x", "ratio_y", "bound", "status"]


def _link(adjacency: List[List[int]], u: int, v: int) -> None:
    adjacency[u].append(v)
    adjacency[v].append(u)


def _unlink(adjacency: List[List[int]], u: int, v: int) -> None:
    adjacency[u].remove(v)
    adjacency[v].remove(u)


def _near(adjacency: List[List[int]], sources: Tuple[int, int], radius: int) -> Set[int]:
    seen = set(sources)
    frontier = list(sources)
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _exchange(adjacency: List[List[int]], kept: List[Edge], omitted: List[Edge], R: int) -> bool:
    """
    Drop one kept edge and insert at least two omitted ones, if possible

    Only omitted edges with an endpoint within R - 2 of the dropped edge
    can become insertable, so only those are offered.
    """
    for i, (u, v) in enumerate(kept):
        _unlink(adjacency, u, v)
        near = _near(adjacency, (u, v), R - 2)
        candidates = [e for e in omitted if e[0] in near or e[1] in near] + [(u, v)]
        added = []
        for a, b in candidates:
            if math.isinf(bounded_distance(adjacency, a, b, R - 1)):
                _link(adjacency, a, b)
                added.append((a, b))
        if len(added) >= 2:
            del kept[i]
            kept.extend(added)
            omitted[:] = [e for e in omitted if e not in added]
            if (u, v) not in added:
                omitted.append((u, v))
            logger.debug("exchange: dropped (%d, %d), inserted %d edges", u, v, len(added))
            return True
        for a, b in added:
            _unlink(adjacency, a, b)
        _link(adjacency, u, v)
    return False


def max_short_cycle_free_subgraph(g: Graph, R: int, order_seed: int = 0) -> Graph:
    """
    Edge-maximal spanning subgraph Y of g with girth > R

    Edges are offered in a seeded random order and kept when their
    endpoints are at distance >= R in the current Y. One-for-two exchanges
    then run until none applies, so K_4 with R = 3 always ends at a 4-cycle
    rather than a star. Every omitted edge is finally checked to have
    endpoints within R - 1 in Y.
    """
    if R < 3:
        raise InputError(f"R must be at least 3, got {R}")
    adjacency: List[List[int]] = [[] for _ in range(g.vertex_count)]
    order = make_rng(order_seed).permutation(g.edge_count)
    kept: List[Edge] = []
    omitted: List[Edge] = []
    for i in order:
        u, v = g.edges[int(i)]
        if math.isinf(bounded_distance(adjacency, u, v, R - 1)):
            _link(adjacency, u, v)
            kept.append((u, v))
        else:
            omitted.append((u, v))

    while omitted and _exchange(adjacency, kept, omitted, R):
        pass

    for u, v in omitted:
        if bounded_distance(adjacency, u, v, R - 1) > R - 1:
            raise InvariantViolation(f"omitted edge ({u}, {v}) could be added without a short cycle")
    return Graph(g.vertex_count, kept)


@dataclass
class CoarseEquivalenceWitness:
    L: float
    y_over_x: float
    x_over_y: float

    def to_dict(self) -> Dict[str, Any]:
        return {"L": self.L, "max_dY_over_dX": self.y_over_x, "max_dX_over_dY": self.x_over_y}


def coarse_distortion(gX: Graph, gY: Graph, cap: int = ALL_PAIRS_CAP) -> CoarseEquivalenceWitness:
    """
    Smallest L with d_X <= L d_Y and d_Y <= L d_X over all vertex pairs
    """
    n = gX.vertex_count
    if gY.vertex_count != n:
        raise InputError(f"vertex sets differ: {n} vs {gY.vertex_count}")
    if n > cap:
        raise GraphTooLargeError(f"all-pairs distances refused for {n} > {cap} vertices")
    if not (is_connected(gX) and is_connected(gY)):
        raise DisconnectedGraphError("coarse distortion is infinite for disconnected graphs")
    if n <= 1:
        return CoarseEquivalenceWitness(1.0, 1.0, 1.0)

    dx = all_pairs_distances(gX)
    dy = all_pairs_distances(gY)
    off = ~np.eye(n, dtype=bool)
    y_over_x = float(np.max(dy[off] / dx[off]))
    x_over_y = float(np.max(dx[off] / dy[off]))
    return CoarseEquivalenceWitness(max(y_over_x, x_over_y), y_over_x, x_over_y)


@dataclass
class CostRow:
    n: int
    label: str
    vertices: int
    edges_x: int
    edges_y: int
    bound: Optional[float]
    status: str

    @property
    def ratio_x(self) -> float:
        return ratio(self.edges_x, self.vertices)

    @property
    def ratio_y(self) -> float:
        return ratio(self.edges_y, self.vertices)

    @property
    def applicable(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "label": self.label,
            "vertices": self.vertices,
            "edges_x": self.edges_x,
            "edges_y": self.edges_y,
            "ratio_x": self.ratio_x,
            "ratio_y": self.ratio_y,
            "bound": self.bound,
            "status": self.status,
        }


@dataclass
class CostReport:
    R: int
    d: int
    epsilon: float
    window: int
    rows: List[CostRow] = field(default_factory=list)

    @property
    def penalty(self) -> float:
        return self.epsilon / self.d ** (self.R - 1)

    def _tail(self) -> List[CostRow]:
        return self.rows[-self.window:] if self.rows else []

    @property
    def ratio_X(self) -> Optional[float]:
        tail = self._tail()
        return min(r.ratio_x for r in tail) if tail else None

    @property
    def ratio_Y(self) -> Optional[float]:
        tail = self._tail()
        return min(r.ratio_y for r in tail) if tail else None

    @property
    def paper_bound(self) -> Optional[float]:
        tail = self._tail()
        if not tail or not all(r.applicable for r in tail):
            return None
        return self.ratio_X - self.penalty

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "d": self.d,
            "epsilon": self.epsilon,
            "window": self.window,
            "ratio_X": self.ratio_X,
            "ratio_Y": self.ratio_Y,
            "paper_bound": self.paper_bound,
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_table(self) -> Dict[str, Any]:
        return {"columns": CSV_COLUMNS, "rows": [r.to_dict() for r in self.rows]}


def cost_row(
    index: int,
    label: str,
    g: Graph,
    R: int,
    epsilon: float,
    d: int,
    order_seed: int = 0,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
) -> CostRow:
    """One family member: build Y and check the edge-count inequality"""
    density = cycle_density_check(g, R, epsilon, cycle_cap)
    Y = max_short_cycle_free_subgraph(g, R, order_seed)
    if not density.passed:
        status = "not_applicable: density"
    elif max_degree(g) > d:
        status = "not_applicable: degree"
    else:
        status = "ok"

    bound = None
    if status == "ok":
        bound = g.edge_count - epsilon / d ** (R - 1) * g.vertex_count
        if Y.edge_count > bound:
            raise InvariantViolation(f"{label}: |E(Y)| = {Y.edge_count} exceeds {bound:.6g}")
    return CostRow(index, label, g.vertex_count, g.edge_count, Y.edge_count, bound, status)


def cost_upper_bound(
    family: GraphFamily,
    R: int,
    epsilon: float,
    d: Optional[int] = None,
    order_seed: int = 0,
    window: Optional[int] = None,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    rows: Optional[List[CostRow]] = None,
) -> CostReport:
    """
    Edge densities of X_n and its greedy girth > R subgraph Y_n

    liminf is read as the minimum over the trailing window (default: the
    last half of the family). Precomputed rows may be passed in.
    """
    if epsilon <= 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    if d is None:
        d = max((max_degree(m.graph) for m in family), default=0)
    if d < 1:
        raise InputError("degree bound d must be positive")
    if rows is None:
        rows = [
            cost_row(i, m.label, m.graph, R, epsilon, d, order_seed, cycle_cap) for i, m in enumerate(family)
        ]
    window = window or max(1, math.ceil(len(rows) / 2))
    report = CostReport(R, d, epsilon, window, rows)
    logger.debug("cost: %d rows, window %d, bound %s", len(rows), window, report.paper_bound)
    return report


@dataclass
class ApproxIsoReport:
    """
    Induced subgraphs X' (domain) and Y' (image) of a witness map

    matched is the matched vertex set of X; frontier holds the matched
    vertices with an unmatched neighbour in X.
    """

    mapping: Dict[int, int]
    vertex_ratio_x: float
    edge_ratio_x: float
    vertex_ratio_y: float
    edge_ratio_y: float
    matched: List[int]
    frontier: List[int]

    @property
    def frontier_ratio(self) -> float:
        return ratio(len(self.frontier), len(self.matched))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertex_ratio_x": self.vertex_ratio_x,
            "edge_ratio_x": self.edge_ratio_x,
            "vertex_ratio_y": self.vertex_ratio_y,
            "edge_ratio_y": self.edge_ratio_y,
            "matched": len(self.matched),
            "frontier": len(self.frontier),
            "frontier_ratio": self.frontier_ratio,
        }


def verify_approx_iso(gX: Graph, gY: Graph, witness: Mapping[int, int]) -> ApproxIsoReport:
    """
    Check that witness is an isomorphism between the induced subgraphs on
    its domain and image, and report what fraction each side covers
    """
    mapping = {int(x): int(y) for x, y in witness.items()}
    for x, y in mapping.items():
        gX._check_vertex(x)
        gY._check_vertex(y)
    if len(set(mapping.values())) != len(mapping):
        raise InputError("witness map is not injective")

    inverse = {y: x for x, y in mapping.items()}
    x_edges = [(u, v) for u, v in gX.edges if u in mapping and v in mapping]
    y_edges = [(u, v) for u, v in gY.edges if u in inverse and v in inverse]
    for u, v in x_edges:
        if not gY.has_edge(mapping[u], mapping[v]):
            raise NotIsomorphicError((u, v), f"edge ({u}, {v}) maps to non-edge ({mapping[u]}, {mapping[v]})")
    for u, v in y_edges:
        if not gX.has_edge(inverse[u], inverse[v]):
            raise NotIsomorphicError(
                (inverse[u], inverse[v]), f"non-edge ({inverse[u]}, {inverse[v]}) maps to edge ({u}, {v})"
            )

    matched = sorted(mapping)
    frontier = [x for x in matched if any(y not in mapping for y in gX.neighbors(x))]
    return ApproxIsoReport(
        mapping=mapping,
        vertex_ratio_x=ratio(len(mapping), gX.vertex_count),
        edge_ratio_x=ratio(len(x_edges), gX.edge_count),
        vertex_ratio_y=ratio(len(mapping), gY.vertex_count),
        edge_ratio_y=ratio(len(y_edges), gY.edge_count),
        matched=matched,
        frontier=frontier,
    )
