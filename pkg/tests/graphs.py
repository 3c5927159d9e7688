"""
Random graph builders shared by the test modules
"""

from typing import Optional

from geomt.constructions import gen_random_regular, girth
from geomt.errors import RetriesExhausted
from geomt.graph import Graph
from geomt.utils import make_rng


def random_connected(seed: int, n: int, extra: int) -> Graph:
    """Random spanning tree on n vertices plus up to `extra` random chords"""
    rng = make_rng(seed)
    edges = set()
    for x in range(1, n):
        y = int(rng.integers(0, x))
        edges.add((y, x))
    for _ in range(extra):
        u, v = (int(a) for a in rng.integers(0, n, size=2))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, edges)


def circulant(n: int, offsets) -> Graph:
    """Circulant graph: x ~ x +- s (mod n) for s in offsets; 2*len(offsets)-regular when all s < n/2"""
    edges = set()
    for x in range(n):
        for s in offsets:
            y = (x + s) % n
            edges.add((min(x, y), max(x, y)))
    return Graph(n, edges)


def cubic_with_girth(seed: int, n: int, min_girth: int) -> Optional[Graph]:
    """A random 3-regular graph if its girth is at least min_girth, else None"""
    try:
        g = gen_random_regular(n, 3, seed)
    except RetriesExhausted:
        return None
    return g if girth(g) >= min_girth else None
