"""
geomt run-config loading and validation
Run configs are YAML mappings whose keys mirror the CLI flags
"""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError

FORMATS = ("json", "text", "csv")


@dataclass
class RunConfig:
    """Every knob a subcommand can read; defaults are the module defaults"""

    command: str = "analyze"
    inputs: List[str] = None
    R: int = 4
    t: Optional[float] = None
    d: Optional[int] = None
    gamma: float = 1.0
    epsilon: Optional[float] = None
    seed: int = 0
    brute_cap: int = 24
    cycle_cap: int = 1_000_000
    jobs: int = 1
    format: str = "json"
    out: Optional[str] = None
    graph_out: Optional[str] = None
    zero_threshold: float = 1e-8
    residual_tol: float = 1e-9
    max_retries: int = 64
    trials: int = 100
    window: Optional[int] = None
    kind: Optional[str] = None
    n: Optional[int] = None
    eulerian: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.inputs is None:
            self.inputs = []

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# key -> accepted python types
_FIELD_TYPES = {
    "R": (int,),
    "t": (int, float),
    "d": (int,),
    "gamma": (int, float),
    "epsilon": (int, float),
    "seed": (int,),
    "brute_cap": (int,),
    "cycle_cap": (int,),
    "jobs": (int,),
    "format": (str,),
    "out": (str,),
    "graph_out": (str,),
    "zero_threshold": (int, float),
    "residual_tol": (int, float),
    "max_retries": (int,),
    "trials": (int,),
    "window": (int,),
    "kind": (str,),
    "n": (int,),
    "eulerian": (bool,),
    "verbose": (bool,),
}


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Load and validate a YAML run-config file
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from None

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError("Run config must be a YAML mapping")

    errors = validate_config(config)
    if errors:
        raise ConfigError("; ".join(errors))
    return config


def validate_config(config: Dict[str, Any]) -> List[str]:
    """
    Validate run-config values and return a list of error messages
    """
    errors = []
    unknown = set(config) - set(_FIELD_TYPES)
    if unknown:
        errors.append(f"unknown keys {sorted(unknown)}")

    for key, types in _FIELD_TYPES.items():
        if key not in config or config[key] is None:
            continue
        value = config[key]
        # bool is an int subclass; only accept it where declared
        if isinstance(value, bool) and bool not in types:
            errors.append(f"'{key}' must be {types[0].__name__}, got bool")
        elif not isinstance(value, types):
            errors.append(f"'{key}' must be {types[0].__name__}, got {type(value).__name__}")

    if config.get("format") is not None and config["format"] not in FORMATS:
        errors.append(f"'format' must be one of {FORMATS}")
    for key in ("brute_cap", "cycle_cap", "jobs", "max_retries", "trials", "window"):
        value = config.get(key)
        if isinstance(value, int) and not isinstance(value, bool) and value < 1:
            errors.append(f"'{key}' must be positive")
    R = config.get("R")
    if isinstance(R, int) and not isinstance(R, bool) and R < 1:
        errors.append("'R' must be positive")
    return errors


def build_config(flags: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """
    Merge defaults < config file < explicit flags into a RunConfig
    """
    values: Dict[str, Any] = {}
    if config_path:
        values.update(load_config_file(config_path))
    values.update({k: v for k, v in flags.items() if v is not None})

    errors = validate_config({k: v for k, v in values.items() if k in _FIELD_TYPES})
    if errors:
        raise ConfigError("; ".join(errors))

    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in values.items() if k in known})
