"""
geomt exact linear algebra over the rationals
Ranks of integer edge vectors and small rational solves; no floating point
"""

import logging
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence

from .errors import InvariantViolation

logger = logging.getLogger(__name__)

MODULUS = 2_147_483_647  # 2^31 - 1, prime

SparseVector = Dict[int, int]


def modp_rank(vectors: Sequence[SparseVector], ncols: int, p: int = MODULUS) -> int:
    """
    Rank over GF(p). Never exceeds the rational rank, so it is a lower bound

    Rows are reduced one at a time against monic pivot rows keyed by their
    leading column; only the sparse pivot rows are kept in memory.
    """
    bound = min(len(vectors), ncols)
    pivots: Dict[int, SparseVector] = {}
    for vec in vectors:
        if len(pivots) == bound:
            break
        current = {k: v % p for k, v in vec.items() if v % p}
        while current:
            col = min(current)
            row = pivots.get(col)
            if row is None:
                inv = pow(current[col], p - 2, p)
                pivots[col] = {k: v * inv % p for k, v in current.items()}
                break
            factor = current[col]
            for k, v in row.items():
                value = (current.get(k, 0) - factor * v) % p
                if value:
                    current[k] = value
                else:
                    current.pop(k, None)
    return len(pivots)


def _normalize(vec: SparseVector) -> SparseVector:
    """Divide out the content and fix the sign of the leading entry"""
    if not vec:
        return vec
    g = 0
    for value in vec.values():
        g = gcd(g, value)
    lead = vec[min(vec)]
    if lead < 0:
        g = -g
    return {k: v // g for k, v in vec.items()}


def combine(a: SparseVector, b: SparseVector, col: int) -> SparseVector:
    """a[col]*b - b[col]*a scaled to primitive form; eliminates col from b"""
    fa, fb = a[col], b.get(col, 0)
    if fb == 0:
        return b
    out = {k: fa * v for k, v in b.items()}
    for k, v in a.items():
        value = out.get(k, 0) - fb * v
        if value:
            out[k] = value
        else:
            out.pop(k, None)
    return _normalize(out)


class IntegerEchelon:
    """
    Incremental row echelon form of integer sparse vectors

    Each stored row has a distinct pivot column (its smallest support index)
    and is eliminated from every incoming vector with fraction-free
    combinations, so independence is decided exactly over the rationals.
    """

    def __init__(self):
        self._rows: Dict[int, SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: SparseVector) -> SparseVector:
        current = _normalize({k: v for k, v in vec.items() if v})
        while current:
            col = min(current)
            row = self._rows.get(col)
            if row is None:
                return current
            current = combine(row, current, col)
        return current

    def add(self, vec: SparseVector) -> bool:
        """Insert vec; True when it was independent of the stored rows"""
        reduced = self.reduce(vec)
        if not reduced:
            return False
        self._rows[min(reduced)] = reduced
        return True


def rational_rank(vectors: Sequence[SparseVector], ncols: int, upper_bound: Optional[int] = None) -> int:
    """
    Exact rank over Q

    A GF(p) rank is computed first. It is a lower bound for the rational
    rank, so when it already meets an upper bound (row count, column count
    or the caller's bound) it is exact. Otherwise the rank is recomputed
    fraction-free.
    """
    if not vectors:
        return 0
    bound = min(len(vectors), ncols)
    if upper_bound is not None:
        bound = min(bound, upper_bound)
    fast = modp_rank(vectors, ncols)
    if fast == bound:
        return fast
    logger.debug("mod-p rank %d below bound %d; confirming rationally", fast, bound)
    echelon = IntegerEchelon()
    for vec in vectors:
        echelon.add(vec)
        if echelon.rank == bound:
            break
    return echelon.rank


def solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    """
    Solve the square system matrix @ x = rhs exactly (Gauss-Jordan over Q)
    """
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for i in range(n):
        pivot = next((j for j in range(i, n) if a[j][i] != 0), None)
        if pivot is None:
            raise InvariantViolation("singular linear system")
        a[i], a[pivot] = a[pivot], a[i]
        piv = a[i][i]
        a[i] = [v / piv for v in a[i]]
        for j in range(n):
            if j != i and a[j][i] != 0:
                factor = a[j][i]
                a[j] = [vj - factor * vi for vj, vi in zip(a[j], a[i])]
    return [row[n] for row in a]
