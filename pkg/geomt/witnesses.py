"""
geomt witnesses: the constants chain, R-representation checks and the
twisted-spectrum defect pipeline for graphs with few short cycles
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .cycles import (
    DEFAULT_CYCLE_CAP,
    DEFAULT_MAX_RETRIES,
    CycleVector,
    EdgeSelection,
    PhaseFunction,
    eulerian_orientation,
    extension_table,
    nice_cycle_vector,
    select_B,
    short_cycle_rank,
    solve_rho,
)
from .errors import (
    DisconnectedGraphError,
    GeomtError,
    InputError,
    InvariantViolation,
    RetriesExhausted,
    StageError,
)
from .expansion import DEFAULT_BRUTE_CAP, cheeger_certificate
from .graph import Graph, all_pairs_distances, is_connected, max_degree
from .spectral import FinitePropagationOperator, constant_vector_defect, represent, spectrum, twisted_laplacian
from .utils import make_rng

logger = logging.getLogger(__name__)

RELATIVE_SLACK = 1e-12
MULTIPLICATIVITY_TOL = 1e-8


def _taylor_remainder(t: float) -> float:
    """|exp(it) - 1 - it + t^2/2| summed from the cubic term on"""
    re, im = 0.0, 0.0
    term = 1.0
    for k in range(1, 60):
        term *= t / k
        if k < 3:
            continue
        # i^k cycles 1, i, -1, -i
        phase = k % 4
        if phase == 0:
            re += term
        elif phase == 1:
            im += term
        elif phase == 2:
            re -= term
        else:
            im -= term
        if term < 1e-30 * max(abs(re), abs(im), 1e-300):
            break
    return math.hypot(re, im)


@dataclass
class ConstantsBundle:
    """
    Constants h, c1, c2, c3, t, epsilon for a degree bound d and gap gamma

    Rational values are kept in `exact`; the float fields are their
    roundings (t is a float and enters `exact` unchanged).
    """

    d: int
    gamma: float
    h: float
    c1: float
    c2: float
    c3: float
    t: float
    epsilon: float
    exact: Dict[str, Fraction] = field(default_factory=dict, repr=False)

    def verify(self) -> Dict[str, bool]:
        """The six defining inequalities, evaluated exactly where possible"""
        q = self.exact
        d = self.d
        t = q["t"]
        a = q["c1"] / (2 * d)
        c3 = _c3(d, q["c1"], q["c2"])
        return {
            "c3_positive": c3 > 0 and c3 == q["c3"],
            "phase_below_gap": d * t * t < q["gamma"],
            "taylor_bound": _taylor_remainder(self.t) <= float(q["c2"] * t * t) * (1 + RELATIVE_SLACK),
            "epsilon_vs_c3": 8 * q["epsilon"] * d * d <= c3 * t ** 4 / 2,
            "epsilon_vs_c1": 2 * q["epsilon"] <= a,
            "epsilon_vs_h": 4 * q["epsilon"] <= q["h"],
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "gamma": self.gamma,
            "h": self.h,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "t": self.t,
            "epsilon": self.epsilon,
            "checks": self.verify(),
        }


def _c3(d: int, c1: Fraction, c2: Fraction) -> Fraction:
    a = c1 / (2 * d)
    half_d = Fraction(d, 2)
    return Fraction(d * d, 4) - (1 - a) * (half_d + c2 * d) ** 2 - a * (half_d + c2 * d - Fraction(1, 2)) ** 2


def derive_constants(d: int, gamma: float, t: Optional[float] = None) -> ConstantsBundle:
    """
    Closed-form constants chain for degree bound d and gap gamma

    h = gamma^2/(8d), c1 = h/(8d^2), c2 the largest power of 1/2 keeping
    c3 at least half its c2 -> 0 value, t = min(sqrt(gamma/(2d)), 6 c2)
    unless a valid t is given, epsilon = min(c3 t^4/(16 d^2), c1/(4d), h/4).
    """
    if d < 2:
        raise InputError(f"degree bound d must be at least 2, got {d}")
    if not 0 < gamma <= 2 * d:
        raise InputError(f"gamma must lie in (0, 2d] = (0, {2 * d}], got {gamma}")

    g = Fraction(gamma)
    h = g * g / (8 * d)
    c1 = h / (8 * d * d)
    floor_c3 = _c3(d, c1, Fraction(0)) / 2
    c2 = Fraction(1, 2)
    while _c3(d, c1, c2) < floor_c3:
        c2 /= 2
    c3 = _c3(d, c1, c2)

    if t is None:
        t_value = min(math.sqrt(gamma / (2 * d)), float(6 * c2))
        # keep the rounded t on the safe side of 6*c2
        if Fraction(t_value) > 6 * c2:
            t_value = math.nextafter(t_value, 0.0)
    else:
        t_value = float(t)
        if t_value <= 0:
            raise InputError(f"t must be positive, got {t}")
    tq = Fraction(t_value)
    epsilon = min(c3 * tq ** 4 / (16 * d * d), c1 / (4 * d), h / 4)

    bundle = ConstantsBundle(
        d=d,
        gamma=float(gamma),
        h=float(h),
        c1=float(c1),
        c2=float(c2),
        c3=float(c3),
        t=t_value,
        epsilon=float(epsilon),
        exact={"gamma": g, "h": h, "c1": c1, "c2": c2, "c3": c3, "t": tq, "epsilon": epsilon},
    )
    failed = [name for name, ok in bundle.verify().items() if not ok]
    if failed:
        if t is not None:
            raise InputError(f"t={t} violates {failed} for d={d}, gamma={gamma}")
        raise InvariantViolation(f"constants chain failed {failed} for d={d}, gamma={gamma}")
    logger.debug("constants d=%d gamma=%g: t=%.3e epsilon=%.3e", d, gamma, t_value, float(epsilon))
    return bundle


@dataclass
class RepresentationReport:
    R: int
    propagation: int
    trials: int
    rejected: int
    max_residual: float
    adjoint_exact: bool
    passed: bool
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _random_operator(rng: np.random.Generator, allowed: np.ndarray, density: float) -> np.ndarray:
    n = allowed.shape[0]
    keep = allowed & (rng.random((n, n)) < density)
    values = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.where(keep, values, 0)


def _longest_loop(dist: np.ndarray, T: np.ndarray, S: np.ndarray) -> float:
    """max of d(x,z) + d(z,y) + d(x,y) over triples with T[x,z] S[z,y] != 0"""
    worst = 0.0
    for z in range(T.shape[0]):
        xs = np.flatnonzero(T[:, z])
        ys = np.flatnonzero(S[z, :])
        if xs.size and ys.size:
            loops = dist[xs, z][:, None] + dist[z, ys][None, :] + dist[np.ix_(xs, ys)]
            worst = max(worst, float(loops.max()))
    return worst


def check_R_representation(
    g: Graph,
    rho: PhaseFunction,
    R: int,
    trials: int = 100,
    seed: int = 0,
    density: float = 0.3,
    tol: float = MULTIPLICATIVITY_TOL,
) -> RepresentationReport:
    """
    Check pi(TS) = pi(T) pi(S) and pi(T*) = pi(T)* on random operators

    T and S have propagation at most R // 3. A pair is resampled (and
    counted) when a contributing triple closes a loop longer than R, where
    multiplicativity is not expected.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("R-representation check needs a connected graph")
    table = extension_table(g, rho)
    dist = all_pairs_distances(g)
    reach = R // 3
    allowed = dist <= reach
    rng = make_rng(seed)

    rejected = 0
    worst = 0.0
    adjoint_exact = True
    done = 0
    budget = 20 * trials
    while done < trials:
        if rejected > budget:
            raise RetriesExhausted(f"{rejected} operator pairs rejected for loops longer than {R}")
        T = _random_operator(rng, allowed, density)
        S = _random_operator(rng, allowed, density)
        if _longest_loop(dist, T, S) > R:
            rejected += 1
            continue
        pT = represent(FinitePropagationOperator(T), table, 1.0)
        pS = represent(FinitePropagationOperator(S), table, 1.0)
        pTS = represent(FinitePropagationOperator(T @ S), table, 1.0)
        worst = max(worst, float(np.linalg.norm(pTS - pT @ pS, 2)))

        pT_star = represent(FinitePropagationOperator(T.conj().T), table, 1.0)
        if not np.array_equal(pT_star, pT.conj().T):
            adjoint_exact = False
        done += 1

    logger.debug("R-representation: %d trials, %d rejected, residual %.3e", trials, rejected, worst)
    return RepresentationReport(R, reach, trials, rejected, worst, adjoint_exact, worst <= tol and adjoint_exact, seed)


def partition_A123(g: Graph, v: CycleVector, selection: EdgeSelection) -> Tuple[List[int], List[int], List[int]]:
    """
    A3: endpoints of B; A1: other vertices touching the support of v;
    A2: everything else
    """
    a3 = {x for edge in selection.B for x in edge}
    touched = {x for edge in v.support for x in edge}
    a1 = touched - a3
    a2 = set(range(g.vertex_count)) - a1 - a3
    return sorted(a1), sorted(a2), sorted(a3)


@dataclass
class DensityCheck:
    R: int
    rank: int
    threshold: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rank - self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {"R": self.R, "rank": self.rank, "threshold": self.threshold, "passed": self.passed, "margin": self.margin}


def cycle_density_check(g: Graph, R: int, epsilon: float, cap: int = DEFAULT_CYCLE_CAP) -> DensityCheck:
    """dim Z_R >= epsilon |V|"""
    rank = short_cycle_rank(g, R, cap).rank
    threshold = epsilon * g.vertex_count
    return DensityCheck(R, rank, threshold, rank >= threshold)


@dataclass
class WitnessReport:
    R: int
    d: int
    t: float
    epsilon: float
    vertices: int
    dims: Tuple[int, float]
    B_size: int
    B: List[Tuple[int, int]]
    expansion: Dict[str, Any]
    partition_sizes: Tuple[int, int, int]
    rayleigh: float
    defect_norm: float
    bound: float
    spectrum_window: Tuple[float, float]
    low_eigenvalue_found: Optional[float]
    window_hit: bool
    conditions: Dict[str, bool]
    size_threshold_met: bool
    asserted: bool
    vector: str
    seed: int
    stages: List[Dict[str, Any]] = field(default_factory=list)
    rho: Optional[PhaseFunction] = field(default=None, repr=False)

    @property
    def defect_within_bound(self) -> bool:
        return self.defect_norm <= self.bound * (1 + RELATIVE_SLACK)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "d": self.d,
            "t": self.t,
            "epsilon": self.epsilon,
            "vertices": self.vertices,
            "dim_Z_R": self.dims[0],
            "epsilon_V": self.dims[1],
            "B_size": self.B_size,
            "B": [list(e) for e in self.B],
            "expansion": self.expansion,
            "partition_sizes": list(self.partition_sizes),
            "rayleigh": self.rayleigh,
            "defect_norm": self.defect_norm,
            "bound": self.bound,
            "defect_within_bound": self.defect_within_bound,
            "spectrum_window": list(self.spectrum_window),
            "low_eigenvalue_found": self.low_eigenvalue_found,
            "window_hit": self.window_hit,
            "conditions": self.conditions,
            "size_threshold_met": self.size_threshold_met,
            "asserted": self.asserted,
            "vector": self.vector,
            "seed": self.seed,
            "stages": self.stages,
        }


def _stage(trace: List[Dict[str, Any]], name: str, fn: Callable[[], Any], describe: Callable[[Any], str]):
    try:
        result = fn()
    except GeomtError as e:
        raise StageError(name, e) from e
    detail = describe(result)
    trace.append({"stage": name, "detail": detail})
    logger.info("[%s] %s", name, detail)
    return result


def spectral_witness(
    g: Graph,
    R: int,
    bundle: ConstantsBundle,
    seed: int = 0,
    brute_cap: int = DEFAULT_BRUTE_CAP,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    zero_threshold: float = 1e-8,
    residual_tol: float = 1e-9,
    max_retries: int = DEFAULT_MAX_RETRIES,
    eulerian: bool = False,
) -> WitnessReport:
    """
    Twisted-Laplacian defect witness for one graph

    Stages: B selection, mid-range expansion of X minus B, a nice (or
    Eulerian) cycle vector on X minus B, the phase solve, and the twisted
    spectrum. The defect inequality and the spectrum window are asserted
    only when dim Z_R < epsilon |V|, X minus B expands by at least h and the
    cycle vector touches at least c1/(2d) |V| vertices outside A3; a failed
    assertion is an invariant violation. max degree <= d is a precondition.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("witness pipeline needs a connected graph")
    d = bundle.d
    if max_degree(g) > d:
        raise InputError(f"max degree {max_degree(g)} exceeds the degree bound d={d}")
    n = g.vertex_count
    t = bundle.t
    trace: List[Dict[str, Any]] = []

    selection = _stage(trace, "select_B", lambda: select_B(g, R, cycle_cap), lambda s: f"dim Z_{R} = {len(s.B)}")
    rest = g.remove_edges(selection.B)

    cert = _stage(
        trace,
        "expansion",
        lambda: cheeger_certificate(rest, "mid_range", brute_cap, zero_threshold),
        lambda c: f"mid-range ratio {c.minimum_ratio:.6g} ({c.method})",
    )
    expansion_ok = cert.minimum_ratio >= bundle.h * (1 - RELATIVE_SLACK)

    def build_vector() -> CycleVector:
        local = eulerian_orientation(rest) if eulerian else nice_cycle_vector(rest, seed, max_retries)
        return CycleVector({e: local.values.get(e, 0) for e in g.edges})

    v = _stage(trace, "cycle_vector", build_vector, lambda w: f"support {len(w.support)} of {g.edge_count} edges")
    rho = _stage(
        trace,
        "solve_rho",
        lambda: solve_rho(g, R, v, selection, residual_tol),
        lambda r: f"{len(r.B)} unknowns solved",
    )

    a1, a2, a3 = partition_A123(g, v, selection)

    def twist():
        rayleigh, defect = constant_vector_defect(g, rho, t, d)
        return rayleigh, defect, spectrum(twisted_laplacian(g, rho, t), zero_threshold)

    rayleigh, defect, report = _stage(
        trace, "twist", twist, lambda out: f"rayleigh {out[0]:.6e}, defect {out[1]:.6e}"
    )

    scale = 0.5 * d * t * t
    s = math.sqrt(1 - 2 * bundle.c3 / (d * d))
    bound = s * scale
    window = (scale * (1 - s), scale * (1 + s))
    tol = 1e-13 * max(1.0, 2.0 * d)
    positive = [x for x in report.eigenvalues if x > tol]
    low = positive[0] if positive else None
    window_hit = any(window[0] - tol <= x <= window[1] + tol for x in report.eigenvalues)

    dim = len(selection.B)
    conditions = {
        "short_cycles_sparse": dim < bundle.epsilon * n,
        "expansion_hypothesis": expansion_ok,
        "support_count": len(a1) >= bundle.c1 / (2 * d) * n,
    }
    asserted = all(conditions.values())

    witness = WitnessReport(
        R=R,
        d=d,
        t=t,
        epsilon=bundle.epsilon,
        vertices=n,
        dims=(dim, bundle.epsilon * n),
        B_size=dim,
        B=list(selection.B),
        expansion=cert.to_dict(),
        partition_sizes=(len(a1), len(a2), len(a3)),
        rayleigh=rayleigh,
        defect_norm=defect,
        bound=bound,
        spectrum_window=window,
        low_eigenvalue_found=low,
        window_hit=window_hit,
        conditions=conditions,
        size_threshold_met=n >= 8 * d / bundle.h,
        asserted=asserted,
        vector="eulerian" if eulerian else "nice",
        seed=seed,
        stages=trace,
        rho=rho,
    )

    if asserted and not (witness.defect_within_bound and window_hit):
        raise StageError(
            "assert",
            InvariantViolation(f"defect {defect:.6e} vs bound {bound:.6e}, window hit {window_hit}"),
        )
    logger.info("[result] asserted=%s defect %.3e <= bound %.3e", asserted, defect, bound)
    return witness


@dataclass
class EulerianReport:
    d: int
    t: float
    expected: float
    rayleigh: float
    eigen_residual: float
    nearest_eigenvalue: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def eulerian_witness(g: Graph, t: float, zero_threshold: float = 1e-8) -> EulerianReport:
    """
    Constant vector under the Eulerian twist of an even-regular graph

    Returns the expected eigenvalue d(1 - cos t), the Rayleigh quotient, the
    residual ||Delta_t xi - d(1 - cos t) xi|| and the twisted eigenvalue
    nearest to d(1 - cos t).
    """
    if not is_connected(g):
        raise DisconnectedGraphError("Eulerian witness needs a connected graph")
    degrees = {len(nbrs) for nbrs in g.adjacency}
    if len(degrees) != 1:
        raise InputError("Eulerian witness needs a regular graph")
    d = degrees.pop()
    rho = PhaseFunction.from_edge_function(eulerian_orientation(g))
    lap = twisted_laplacian(g, rho, t)

    n = g.vertex_count
    xi = np.full(n, 1 / math.sqrt(n))
    image = lap.entries @ xi
    expected = 2 * d * math.sin(t / 2) ** 2
    rayleigh = float(np.real(np.vdot(xi, image)))
    residual = float(np.linalg.norm(image - expected * xi))
    eigenvalues = np.asarray(spectrum(lap, zero_threshold).eigenvalues)
    nearest = float(eigenvalues[np.argmin(np.abs(eigenvalues - expected))])
    return EulerianReport(d, t, expected, rayleigh, residual, nearest)
