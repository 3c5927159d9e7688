"""
geomt: quantitative geometric property (T) for graph sequences
Spectral gaps, expansion certificates, short-cycle spaces, twisted-Laplacian
witnesses, combinatorial cost bounds and tree-grafted expanders
"""

from .graph import Graph, GraphFamily
from .io import parse_graph, serialize_graph
from .spectral import laplacian, spectrum, twisted_laplacian
from .cycles import nice_cycle_vector, select_B, short_cycle_rank, solve_rho
from .witnesses import derive_constants, spectral_witness
from .runner import run

__all__ = [
    "Graph",
    "GraphFamily",
    "parse_graph",
    "serialize_graph",
    "laplacian",
    "spectrum",
    "twisted_laplacian",
    "nice_cycle_vector",
    "select_B",
    "short_cycle_rank",
    "solve_rho",
    "derive_constants",
    "spectral_witness",
    "run",
]
