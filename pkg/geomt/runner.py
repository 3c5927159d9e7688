"""
geomt subcommand runner: one function per subcommand, each returning a
report dict; run() maps failures to exit codes
"""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from .constructions import STANDARD_KINDS, gen_random_regular, gen_standard, girth, graft_tree, margulis_simplification
from .cost import coarse_distortion, cost_row, cost_upper_bound
from .cycles import bridges, cycle_space_dim, nice_cycle_vector, select_B, short_cycle_rank
from .errors import DisconnectedGraphError, GeomtError, InputError, ResourceCapError, RetriesExhausted
from .expansion import cheeger_exact, graft_expansion_bound
from .graph import Graph, ball, connected_components, is_connected, max_degree
from .io import emit, load_family, load_graph_file, serialize_graph, write_graph_file
from .parser import RunConfig
from .spectral import laplacian, spectrum
from .witnesses import check_R_representation, derive_constants, eulerian_witness, spectral_witness

logger = logging.getLogger(__name__)

COMMANDS = ("analyze", "cycles", "witness", "cost", "graft", "gen", "constants", "distortion")
GEN_KINDS = STANDARD_KINDS + ("random_regular", "margulis")
REPRESENTATION_LIMIT = 200


class Outcome:
    """A report plus the exit code it should end with"""

    def __init__(self, report: Any, exit_code: int = 0, text: Optional[str] = None):
        self.report = report
        self.exit_code = exit_code
        self.text = text


def _schema(kind: str) -> str:
    return f"geomt/{kind}@1"


def _single_input(config: RunConfig) -> str:
    if len(config.inputs) != 1:
        raise InputError(f"'{config.command}' takes exactly one graph file, got {len(config.inputs)}")
    return config.inputs[0]


def _map(fn: Callable, items: List[Any], jobs: int) -> List[Any]:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def analyze_graph(item: Tuple[str, Graph], R: int, brute_cap: int, cycle_cap: int, zero_threshold: float) -> Dict[str, Any]:
    """Per-graph summary; a cycle budget overrun leaves dim_Z_R unset and marks the record partial"""
    label, g = item
    degrees = [len(nbrs) for nbrs in g.adjacency]
    report = spectrum(laplacian(g), zero_threshold)
    found = bridges(g)
    record: Dict[str, Any] = {
        "label": label,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "min_degree": min(degrees, default=0),
        "max_degree": max(degrees, default=0),
        "components": len(connected_components(g)),
        "girth": girth(g),
        "gap": report.gap,
        "zero_multiplicity": report.zero_multiplicity,
        "bridges": [list(e) for e in found.bridges],
        "non_bridge_count": found.non_bridge_count,
        "dim_Z": cycle_space_dim(g),
        "R": R,
        "dim_Z_R": None,
        "cheeger": None,
        "partial": False,
    }
    try:
        record["dim_Z_R"] = short_cycle_rank(g, R, cycle_cap).rank
    except ResourceCapError as e:
        record["partial"] = True
        record["error"] = str(e)
    if 0 < g.vertex_count <= brute_cap and is_connected(g):
        record["cheeger"] = cheeger_exact(g, "half", brute_cap).to_dict()
    return record


def cmd_analyze(config: RunConfig) -> Outcome:
    family = load_family(config.inputs)
    worker = partial(
        analyze_graph, R=config.R, brute_cap=config.brute_cap, cycle_cap=config.cycle_cap, zero_threshold=config.zero_threshold
    )
    records = _map(worker, [(m.label, m.graph) for m in family], config.jobs)
    partial_run = any(r["partial"] for r in records)
    result = {"schema": _schema("analyze"), "R": config.R, "graphs": records}
    return Outcome(result, 3 if partial_run else 0)


def cmd_cycles(config: RunConfig) -> Outcome:
    g = load_graph_file(_single_input(config))
    found = short_cycle_rank(g, config.R, config.cycle_cap)
    result: Dict[str, Any] = {
        "schema": _schema("cycles"),
        "R": config.R,
        "seed": config.seed,
        "cycle_count": len(found.cycles),
        "cycles": [list(c) for c in found.cycles],
        "rank": found.rank,
        "dim_Z": cycle_space_dim(g),
        "bridges": [list(e) for e in bridges(g).bridges],
    }
    if is_connected(g):
        selection = select_B(g, config.R, config.cycle_cap)
        result["selection"] = selection.to_dict()
        result["nice_vector"] = nice_cycle_vector(g, config.seed, config.max_retries).to_list()
    return Outcome(result)


def _degree_bound(config: RunConfig, g: Graph) -> int:
    return config.d if config.d is not None else max(2, max_degree(g))


def cmd_witness(config: RunConfig) -> Outcome:
    g = load_graph_file(_single_input(config))
    if not is_connected(g):
        raise DisconnectedGraphError("witness needs a connected graph")
    bundle = derive_constants(_degree_bound(config, g), config.gamma, config.t)
    witness = spectral_witness(
        g,
        config.R,
        bundle,
        seed=config.seed,
        brute_cap=config.brute_cap,
        cycle_cap=config.cycle_cap,
        zero_threshold=config.zero_threshold,
        residual_tol=config.residual_tol,
        max_retries=config.max_retries,
        eulerian=config.eulerian,
    )
    result: Dict[str, Any] = {"schema": _schema("witness"), "constants": bundle.to_dict()}
    result.update(witness.to_dict())

    if g.vertex_count <= REPRESENTATION_LIMIT:
        try:
            result["representation"] = check_R_representation(
                g, witness.rho, config.R, config.trials, config.seed
            ).to_dict()
        except RetriesExhausted as e:
            result["representation"] = {"skipped": str(e)}
    if config.eulerian and len({len(nbrs) for nbrs in g.adjacency}) == 1:
        result["eulerian"] = eulerian_witness(g, bundle.t, config.zero_threshold).to_dict()
    return Outcome(result)


def cmd_cost(config: RunConfig) -> Outcome:
    if config.epsilon is None:
        raise InputError("cost needs --epsilon")
    family = load_family(config.inputs)
    d = config.d if config.d is not None else max(max_degree(m.graph) for m in family)
    worker = partial(
        _cost_worker, R=config.R, epsilon=config.epsilon, d=d, order_seed=config.seed, cycle_cap=config.cycle_cap
    )
    rows = _map(worker, [(i, m.label, m.graph) for i, m in enumerate(family)], config.jobs)
    report = cost_upper_bound(family, config.R, config.epsilon, d, config.seed, config.window, config.cycle_cap, rows)
    if config.format == "csv":
        return Outcome(report.to_table())
    result = {"schema": _schema("cost"), "seed": config.seed}
    result.update(report.to_dict())
    return Outcome(result)


def _cost_worker(item, R, epsilon, d, order_seed, cycle_cap):
    index, label, g = item
    return cost_row(index, label, g, R, epsilon, d, order_seed, cycle_cap)


def cmd_graft(config: RunConfig) -> Outcome:
    Y = load_graph_file(_single_input(config))
    X, spec = graft_tree(Y, config.R)
    local, _ = ball(X, spec.root, config.R)
    result: Dict[str, Any] = {
        "schema": _schema("graft"),
        "graft": spec.to_dict(),
        "vertices": X.vertex_count,
        "edges": X.edge_count,
        "max_degree": max_degree(X),
        "base_max_degree": max_degree(Y),
        "ball_cycle_free": is_connected(local) and local.edge_count == local.vertex_count - 1,
    }
    if Y.vertex_count <= config.brute_cap:
        h = cheeger_exact(Y, "mid_range", config.brute_cap).minimum_ratio
        result["base_mid_range"] = h
        result["bound"] = graft_expansion_bound(h) if h > 0 else None
    if X.vertex_count <= config.brute_cap:
        result["grafted_half"] = cheeger_exact(X, "half", config.brute_cap).minimum_ratio

    header = {"kind": "graft", "R": config.R, "root": spec.root}
    if config.graph_out:
        write_graph_file(config.graph_out, X, header)
        result["graph_file"] = config.graph_out
    else:
        result["graph"] = serialize_graph(X, header)
    return Outcome(result)


def cmd_gen(config: RunConfig) -> Outcome:
    kind = config.kind
    if kind not in GEN_KINDS:
        raise InputError(f"gen needs --kind, one of {GEN_KINDS}")
    header: Dict[str, Any] = {"kind": kind, "n": config.n}
    if kind == "random_regular":
        if config.n is None or config.d is None:
            raise InputError("random_regular needs --n and --d")
        g = gen_random_regular(config.n, config.d, config.seed)
        header.update({"d": config.d, "seed": config.seed})
    elif kind == "margulis":
        if config.n is None:
            raise InputError("margulis needs --n")
        g, simplification = margulis_simplification(config.n)
        header.update(simplification.to_dict())
        header["spectral_gap"] = spectrum(laplacian(g), config.zero_threshold).gap
    else:
        g = gen_standard(kind, config.n)
    return Outcome(None, text=serialize_graph(g, header))


def cmd_constants(config: RunConfig) -> Outcome:
    if config.d is None:
        raise InputError("constants needs --d")
    bundle = derive_constants(config.d, config.gamma, config.t)
    result = {"schema": _schema("constants")}
    result.update(bundle.to_dict())
    return Outcome(result)


def cmd_distortion(config: RunConfig) -> Outcome:
    if len(config.inputs) != 2:
        raise InputError("distortion takes two graph files on one vertex set")
    gX = load_graph_file(config.inputs[0])
    gY = load_graph_file(config.inputs[1])
    result = {"schema": _schema("distortion")}
    result.update(coarse_distortion(gX, gY).to_dict())
    return Outcome(result)


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "analyze": cmd_analyze,
    "cycles": cmd_cycles,
    "witness": cmd_witness,
    "cost": cmd_cost,
    "graft": cmd_graft,
    "gen": cmd_gen,
    "constants": cmd_constants,
    "distortion": cmd_distortion,
}


def run(config: RunConfig) -> int:
    """
    Execute one subcommand and write its output

    Returns:
        exit code: 0 success, 2 input error, 3 resource cap, 4 invariant
        violation or unexpected failure
    """
    handler = HANDLERS.get(config.command)
    try:
        if handler is None:
            raise InputError(f"unknown command {config.command!r}")
        if config.format == "csv" and config.command != "cost":
            raise InputError("csv output is only available for family-level tables (cost)")
        outcome = handler(config)
        if outcome.text is not None:
            if config.out:
                Path(config.out).write_text(outcome.text, encoding="utf-8")
            else:
                sys.stdout.write(outcome.text)
        else:
            emit(outcome.report, config.format, config.out)
        return outcome.exit_code
    except GeomtError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return 4
