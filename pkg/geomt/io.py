"""
geomt I/O utilities: edge-list codec, family loading and report output
Reports go out as JSON, YAML-rendered text or CSV
"""

import csv
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import yaml

from .errors import GraphFormatError, InputError
from .graph import FamilyMember, Graph, GraphFamily
from .utils import to_jsonable

GRAPH_SUFFIXES = (".txt", ".edges")


def parse_graph(text: str) -> Graph:
    """
    Parse an edge-list document

    Format: '#' lines are comments; the first other line is "n <count>";
    every following line is "<u> <v>" with 0 <= u, v < n and u != v.
    Errors name the offending line.
    """
    vertex_count: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()

        if vertex_count is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphFormatError(f"expected header 'n <vertex_count>', got {line!r}", lineno)
            try:
                vertex_count = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"vertex count is not an integer: {parts[1]!r}", lineno) from None
            if vertex_count < 0:
                raise GraphFormatError("vertex count must be non-negative", lineno)
            continue

        if len(parts) != 2:
            raise GraphFormatError(f"expected '<u> <v>', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"vertex ids must be integers: {line!r}", lineno) from None
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphFormatError(f"vertex index out of range [0, {vertex_count}): {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)

    if vertex_count is None:
        raise GraphFormatError("empty document: missing 'n <vertex_count>' header")
    return Graph(vertex_count, edges)


def serialize_graph(g: Graph, header: Optional[Dict[str, Any]] = None) -> str:
    """Canonical edge list: header comments, 'n' line, edges sorted with u < v"""
    lines = [f"# {key}: {value}" for key, value in (header or {}).items()]
    lines.append(f"n {g.vertex_count}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def load_from_file_or_stdin(input_file: Optional[str] = None) -> str:
    """
    Load text content from file or stdin ('-' or None)
    """
    if input_file and input_file != "-":
        try:
            return Path(input_file).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise InputError(f"Input file not found: {input_file}") from None
        except OSError as e:
            raise InputError(f"Error reading {input_file}: {e}") from None
    try:
        return sys.stdin.read()
    except OSError as e:
        raise InputError(f"Error reading from stdin: {e}") from None


def load_graph_file(path: str) -> Graph:
    try:
        return parse_graph(load_from_file_or_stdin(path))
    except GraphFormatError as e:
        raise GraphFormatError(f"{path}: {e}") from None


def write_graph_file(path: str, g: Graph, header: Optional[Dict[str, Any]] = None) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(serialize_graph(g, header), encoding="utf-8")


def load_family(paths: Sequence[str]) -> GraphFamily:
    """
    Build a family from graph files and/or directories of graph files

    Directory members are taken in file-name order and labelled by stem.
    """
    files: List[Path] = []
    for entry in paths:
        p = Path(entry)
        if p.is_dir():
            files.extend(sorted(f for f in p.iterdir() if f.suffix in GRAPH_SUFFIXES))
        elif p.exists():
            files.append(p)
        else:
            raise InputError(f"Input not found: {entry}")
    if not files:
        raise InputError("no graph files found")
    return GraphFamily([FamilyMember(f.stem, load_graph_file(str(f))) for f in files])


def output_result(result: Any, output_format: str = "json", file: Optional[TextIO] = None) -> None:
    """
    Output a report in the requested format to file or stdout

    Args:
        result: report dict, or for csv a dict with "columns" and "rows"
        output_format: "json", "text" or "csv"
        file: output stream (defaults to stdout)
    """
    if file is None:
        file = sys.stdout
    data = to_jsonable(result)

    if output_format == "text":
        yaml.safe_dump(data, file, default_flow_style=False, sort_keys=False, indent=2)
    elif output_format == "csv":
        if not isinstance(data, dict) or "rows" not in data or "columns" not in data:
            raise InputError("csv output is only available for family-level tables")
        writer = csv.DictWriter(file, fieldnames=data["columns"], lineterminator="\n")
        writer.writeheader()
        for row in data["rows"]:
            writer.writerow({k: row.get(k) for k in data["columns"]})
    else:
        json.dump(data, file, indent=2)
        file.write("\n")


def emit(result: Any, output_format: str = "json", output_file: Optional[str] = None) -> None:
    """output_result to a path (created as needed) or stdout"""
    if output_file:
        out = Path(output_file)
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8") as f:
            output_result(result, output_format, f)
    else:
        output_result(result, output_format)
