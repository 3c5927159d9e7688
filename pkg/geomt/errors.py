"""
geomt error hierarchy
Every error carries the CLI exit code it maps to
"""

from typing import Any, Optional, Tuple


class GeomtError(Exception):
    """Base class for all geomt failures"""

    exit_code = 4


class InputError(GeomtError, ValueError):
    """Caller supplied something unusable (exit 2)"""

    exit_code = 2


class GraphFormatError(InputError):
    """Malformed edge-list document"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(InputError):
    """Invalid run-config file or flag combination"""


class DisconnectedGraphError(InputError):
    """Operation requires a connected graph"""


class OddDegreeError(InputError):
    """Eulerian orientation requested on a graph with an odd-degree vertex"""

    def __init__(self, vertex: int, degree: int):
        self.vertex = vertex
        self.degree = degree
        super().__init__(f"vertex {vertex} has odd degree {degree}")


class NotIsomorphicError(InputError):
    """Witness map is not an isomorphism of induced subgraphs"""

    def __init__(self, pair: Tuple[int, int], message: str):
        self.pair = pair
        super().__init__(message)


class ResourceCapError(GeomtError):
    """A configured budget was exhausted (exit 3)"""

    exit_code = 3


class CycleBudgetExceeded(ResourceCapError):
    """Short-cycle enumeration produced more cycles than the cap"""

    def __init__(self, cap: int, R: int):
        self.cap = cap
        self.R = R
        super().__init__(f"more than {cap} cycles of length <= {R}; raise --cycle-cap")


class GraphTooLargeError(ResourceCapError):
    """Exact computation refused above its size cap"""


class RetriesExhausted(ResourceCapError):
    """Randomized construction did not succeed within its retry budget"""

    def __init__(self, message: str, best: Any = None):
        self.best = best
        super().__init__(message)


class ConvergenceError(ResourceCapError):
    """Iterative eigensolver did not converge"""

    def __init__(self, message: str, residual: Optional[float] = None):
        self.residual = residual
        super().__init__(message)


class InvariantViolation(GeomtError):
    """An internally guaranteed identity failed (exit 4)"""

    exit_code = 4


class StageError(GeomtError):
    """Failure inside a named pipeline stage"""

    def __init__(self, stage: str, cause: GeomtError):
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
        super().__init__(f"stage '{stage}': {cause}")
