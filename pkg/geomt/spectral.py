"""
geomt spectral layer: Laplacians, twisted Laplacians and their spectra,
propagation of finite-propagation operators, and the matching decomposition
of the Laplacian into a sum of (I - involution) terms
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .cycles import PhaseFunction
from .errors import ConvergenceError, InputError, InvariantViolation
from .graph import Graph, all_pairs_distances, max_degree
from .utils import Edge

logger = logging.getLogger(__name__)

DENSE_LIMIT = 4000
SPARSE_EIGEN_COUNT = 16
SHIFT = -1e-2  # shift-invert target just below the spectrum of a PSD matrix

Matrix = Union[np.ndarray, sp.csr_matrix]


def _is_sparse(entries: Matrix) -> bool:
    return sp.issparse(entries)


@dataclass
class LaplacianMatrix:
    """Integer graph Laplacian; dense up to DENSE_LIMIT vertices, CSR above"""

    dimension: int
    entries: Matrix

    @property
    def sparse(self) -> bool:
        return _is_sparse(self.entries)

    def toarray(self) -> np.ndarray:
        return self.entries.toarray() if self.sparse else np.asarray(self.entries)


@dataclass
class TwistedLaplacian:
    """Hermitian Laplacian with off-diagonal entries -exp(i t rho(x, y))"""

    dimension: int
    entries: Matrix
    phase_scale: float
    phases: PhaseFunction = field(repr=False)

    @property
    def sparse(self) -> bool:
        return _is_sparse(self.entries)

    def toarray(self) -> np.ndarray:
        return self.entries.toarray() if self.sparse else np.asarray(self.entries)


@dataclass
class SpectrumReport:
    eigenvalues: List[float]
    zero_multiplicity: int
    gap: Optional[float]
    partial: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"eigenvalues": self.eigenvalues, "zero_multiplicity": self.zero_multiplicity, "gap": self.gap}


@dataclass
class MatchingDecomposition:
    """
    Proper edge colouring as matchings; involutions[i][x] is x's partner in
    class i, or x itself when x is unmatched there
    """

    colour_classes: List[List[Edge]]
    involutions: List[List[int]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classes": len(self.colour_classes),
            "colour_classes": [[list(e) for e in cls] for cls in self.colour_classes],
        }


@dataclass
class FinitePropagationOperator:
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise InputError(f"operator must be square, got shape {self.matrix.shape}")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def compose(self, other: "FinitePropagationOperator") -> "FinitePropagationOperator":
        return FinitePropagationOperator(self.matrix @ other.matrix)


def laplacian(g: Graph) -> LaplacianMatrix:
    """Degree on the diagonal, -1 for each edge"""
    n = g.vertex_count
    degrees = np.array([len(nbrs) for nbrs in g.adjacency], dtype=np.int64)
    if n <= DENSE_LIMIT:
        m = np.diag(degrees)
        for u, v in g.edges:
            m[u, v] = m[v, u] = -1
        return LaplacianMatrix(n, m)

    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([edges[:, 0], edges[:, 1], np.arange(n)])
    cols = np.concatenate([edges[:, 1], edges[:, 0], np.arange(n)])
    data = np.concatenate([-np.ones(2 * len(edges), dtype=np.int64), degrees])
    return LaplacianMatrix(n, sp.csr_matrix((data, (rows, cols)), shape=(n, n)))


def twisted_laplacian(g: Graph, rho: PhaseFunction, t: float) -> TwistedLaplacian:
    """
    Laplacian twisted by the phases t*rho on edges

    At t = 0 every off-diagonal entry is exactly -1 and the matrix equals
    laplacian(g).
    """
    n = g.vertex_count
    phases = np.array([rho.value(u, v) for u, v in g.edges], dtype=float)
    weights = -np.exp(1j * t * phases)
    degrees = np.array([len(nbrs) for nbrs in g.adjacency], dtype=complex)

    if n <= DENSE_LIMIT:
        m = np.diag(degrees)
        for (u, v), w in zip(g.edges, weights):
            m[u, v] = w
            m[v, u] = np.conj(w)
        return TwistedLaplacian(n, m, t, rho)

    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([edges[:, 0], edges[:, 1], np.arange(n)])
    cols = np.concatenate([edges[:, 1], edges[:, 0], np.arange(n)])
    data = np.concatenate([weights, np.conj(weights), degrees])
    return TwistedLaplacian(n, sp.csr_matrix((data, (rows, cols)), shape=(n, n)), t, rho)


def _check_hermitian(entries: Matrix, tol: float = 1e-10) -> None:
    if _is_sparse(entries):
        diff = abs(entries - entries.conj().T).max() if entries.nnz else 0.0
    else:
        diff = np.max(np.abs(entries - entries.conj().T)) if entries.size else 0.0
    if diff > tol:
        raise InputError(f"matrix is not Hermitian (max asymmetry {diff:.3e})")


def _sparse_lowest(entries: sp.csr_matrix, count: int) -> np.ndarray:
    dtype = complex if np.iscomplexobj(entries.data) else float
    try:
        values = eigsh(entries.astype(dtype), k=count, sigma=SHIFT, which="LM", return_eigenvectors=False)
    except ArpackNoConvergence as e:
        residual = math.nan
        if e.eigenvalues is not None and len(e.eigenvalues):
            vecs = e.eigenvectors
            residual = float(max(np.linalg.norm(entries @ vecs[:, i] - e.eigenvalues[i] * vecs[:, i]) for i in range(vecs.shape[1])))
        raise ConvergenceError(f"eigensolver did not converge: {e}", residual) from None
    return np.sort(np.real(values))


def spectrum(
    m: Union[LaplacianMatrix, TwistedLaplacian],
    zero_threshold: float = 1e-8,
    k: int = SPARSE_EIGEN_COUNT,
) -> SpectrumReport:
    """
    Ascending eigenvalues with zero multiplicity and gap

    Dense matrices get the full spectrum. Sparse ones get the lowest
    eigenvalues by shift-invert Lanczos, marked partial: k at first, doubled
    while every returned value is still zero, so the zero multiplicity and
    the gap are those of the whole matrix. Eigenvalues at or below
    zero_threshold * max(1, spectral scale) count as zero.
    """
    entries = m.entries
    _check_hermitian(entries)
    n = m.dimension
    if n == 0:
        return SpectrumReport([], 0, None)

    if not _is_sparse(entries) or n < 3:
        values = np.linalg.eigvalsh(entries.toarray() if _is_sparse(entries) else np.asarray(entries))
        scale = max(1.0, float(values[-1]))
        partial = False
    else:
        scale = max(1.0, 2.0 * float(np.max(np.real(entries.diagonal()))))
        count = max(1, min(k, n - 1))
        while True:
            logger.debug("sparse eigensolver: %d lowest of %d", count, n)
            values = _sparse_lowest(entries, count)
            if values[-1] > zero_threshold * scale or count >= n - 1:
                break
            count = min(2 * count, n - 1)
        partial = True

    tol = zero_threshold * scale
    zeros = int(np.count_nonzero(values <= tol))
    above = values[values > tol]
    gap = float(above[0]) if above.size else None
    return SpectrumReport([float(x) for x in values], zeros, gap, partial)


def constant_vector_defect(g: Graph, rho: PhaseFunction, t: float, d: int):
    """
    Rayleigh quotient of the normalized constant vector under the twisted
    Laplacian and its distance from (d t^2 / 2) times that vector

    Uses 1 - exp(i a) = 2 sin^2(a/2) - i sin(a), which keeps full relative
    precision for tiny t.

    Returns:
        (rayleigh, defect_norm)
    """
    n = g.vertex_count
    if n == 0:
        return 0.0, 0.0
    if d < max_degree(g):
        raise InputError(f"d={d} is below the maximum degree {max_degree(g)}")

    z = np.zeros(n, dtype=complex)
    for u, v in g.edges:
        a = t * rho.value(u, v)
        s = math.sin(a / 2)
        term = complex(2 * s * s, -math.sin(a))
        z[u] += term
        # rho(v, u) = -rho(u, v)
        z[v] += term.conjugate()

    rayleigh = float(np.real(z.sum())) / n
    target = 0.5 * d * t * t
    defect = math.sqrt(float(np.sum(np.abs(z - target) ** 2)) / n)
    return rayleigh, defect


def propagation(op: FinitePropagationOperator, g: Graph) -> float:
    """
    Largest graph distance between x, y with a nonzero entry T[x, y]

    Returns an int, or inf when a nonzero entry joins two components.
    """
    if op.dimension != g.vertex_count:
        raise InputError(f"operator dimension {op.dimension} != vertex count {g.vertex_count}")
    rows, cols = np.nonzero(op.matrix)
    if rows.size == 0:
        return 0
    dist = all_pairs_distances(g)
    worst = float(np.max(dist[rows, cols]))
    return math.inf if math.isinf(worst) else int(worst)


def edge_colouring_decomposition(g: Graph) -> MatchingDecomposition:
    """
    Greedy proper edge colouring, at most 2*max_degree - 1 classes

    The identity sum_i (I - tau_i) = Laplacian is checked in integer
    arithmetic before returning.
    """
    n = g.vertex_count
    used: List[set] = [set() for _ in range(n)]
    classes: List[List[Edge]] = []
    for u, v in g.edges:
        colour = 0
        while colour in used[u] or colour in used[v]:
            colour += 1
        if colour == len(classes):
            classes.append([])
        classes[colour].append((u, v))
        used[u].add(colour)
        used[v].add(colour)

    involutions = []
    for cls in classes:
        perm = list(range(n))
        for u, v in cls:
            perm[u], perm[v] = v, u
        involutions.append(perm)

    decomposition = MatchingDecomposition(classes, involutions)
    _verify_decomposition(g, decomposition)
    logger.debug("edge colouring: %d classes, max degree %d", len(classes), max_degree(g))
    return decomposition


def _verify_decomposition(g: Graph, decomposition: MatchingDecomposition) -> None:
    n = g.vertex_count
    if g.edge_count and len(decomposition.colour_classes) > 2 * max_degree(g) - 1:
        raise InvariantViolation("greedy colouring used more than 2*max_degree - 1 classes")

    rows, cols, data = [], [], []
    for perm in decomposition.involutions:
        if any(perm[perm[x]] != x for x in range(n)):
            raise InvariantViolation("colour class permutation is not an involution")
        for x, y in enumerate(perm):
            if y != x:
                rows += [x, x]
                cols += [x, y]
                data += [1, -1]
    total = sp.csr_matrix((np.array(data, dtype=np.int64), (rows, cols)), shape=(n, n))
    lap = laplacian(g).entries
    lap = lap if sp.issparse(lap) else sp.csr_matrix(lap)
    if (total - lap).count_nonzero():
        raise InvariantViolation("sum of (I - tau_i) differs from the Laplacian")


def represent(op: FinitePropagationOperator, table: np.ndarray, t: float) -> np.ndarray:
    """
    Twist an operator by extended phases: T[x, y] * exp(i t rho(x, y))

    table is extension_table(g, rho); twisting laplacian(g) this way gives
    the twisted Laplacian.
    """
    mask = op.matrix != 0
    if np.any(np.isnan(table[mask])):
        raise InputError("operator couples vertices with no extended phase (different components)")
    phases = np.where(mask, table, 0.0)
    return op.matrix * np.exp(1j * t * phases)
