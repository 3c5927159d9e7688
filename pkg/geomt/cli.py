"""
geomt command-line interface
Spectral gaps, short-cycle spaces, twisted-Laplacian witnesses and cost bounds
"""

import argparse
import logging
import sys
from typing import List, Optional

from .errors import GeomtError
from .parser import FORMATS, build_config
from .runner import COMMANDS, GEN_KINDS, run

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geomt",
        description="geomt: quantitative geometric property (T) toolkit for graph sequences",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Degrees, girth, spectral gap, bridges and dim Z_R for every graph in a directory
  geomt analyze graphs/ --R 4

  # Twisted-Laplacian witness with the constants for d=3, gamma=1
  geomt witness petersen.txt --R 4 --d 3 --gamma 1 --verbose

  # Cost bound table for a family, as CSV
  geomt cost family/ --R 3 --epsilon 0.5 --d 3 --format csv

  # Generators and grafting
  geomt gen --kind random_regular --n 40 --d 3 --seed 7 --out g.txt
  geomt graft base.txt --R 2 --graph-out grafted.txt

  # Constants chain and coarse distortion
  geomt constants --d 3 --gamma 1
  geomt distortion x.txt y.txt
        """.strip(),
    )

    parser.add_argument("command", choices=COMMANDS, help="Command to execute")
    parser.add_argument("inputs", nargs="*", help="Graph files or directories ('-' reads stdin)")
    parser.add_argument("--config", "-c", help="YAML run-config file (flags override it)")
    parser.add_argument("--R", type=int, help="Short-cycle length / graft depth (default: 4)")
    parser.add_argument("--t", type=float, help="Phase scale (default: derived from d and gamma)")
    parser.add_argument("--d", type=int, help="Degree bound (default: the graph's max degree)")
    parser.add_argument("--gamma", type=float, help="Spectral gap hypothesis (default: 1.0)")
    parser.add_argument("--epsilon", type=float, help="Short-cycle density for cost bounds")
    parser.add_argument("--seed", type=int, help="Seed for every randomized step (default: 0)")
    parser.add_argument("--brute-cap", dest="brute_cap", type=int, help="Largest graph for exact Cheeger (default: 24)")
    parser.add_argument("--cycle-cap", dest="cycle_cap", type=int, help="Short-cycle enumeration cap (default: 10^6)")
    parser.add_argument("--jobs", "-j", type=int, help="Worker processes for family commands (default: 1)")
    parser.add_argument("--format", "-f", choices=FORMATS, help="Output format (default: json)")
    parser.add_argument("--out", "-o", help="Output file (default: stdout)")
    parser.add_argument("--graph-out", dest="graph_out", help="graft: write the grafted graph here")
    parser.add_argument("--zero-threshold", dest="zero_threshold", type=float, help="Relative zero eigenvalue cutoff")
    parser.add_argument("--residual-tol", dest="residual_tol", type=float, help="Phase solve residual tolerance")
    parser.add_argument("--max-retries", dest="max_retries", type=int, help="Cycle vector resampling budget")
    parser.add_argument("--trials", type=int, help="Operator pairs for the R-representation check")
    parser.add_argument("--window", type=int, help="cost: trailing window for liminf estimates")
    parser.add_argument("--kind", choices=GEN_KINDS, help="gen: graph kind")
    parser.add_argument("--n", type=int, help="gen: size parameter")
    parser.add_argument("--eulerian", action="store_true", default=None, help="witness: use an Eulerian orientation")
    parser.add_argument("--verbose", "-v", action="store_true", default=None, help="Log stage traces to stderr")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    args = build_parser().parse_args(argv)
    flags = vars(args)
    config_path = flags.pop("config")

    try:
        config = build_config(flags, config_path)
    except GeomtError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
