"""
geomt utilities: seeded randomness, JSON coercion, bit tricks
"""

import math
from fractions import Fraction
from typing import Any, Tuple

import numpy as np

Edge = Tuple[int, int]


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for every randomized routine"""
    return np.random.default_rng(seed)


def edge_key(x: int, y: int) -> Tuple[Edge, int]:
    """
    Canonical storage key for the oriented edge (x, y)

    Returns:
        ((min, max), sign) where sign is +1 when (x, y) is already canonical
    """
    if x < y:
        return (x, y), 1
    return (y, x), -1


def to_jsonable(obj: Any) -> Any:
    """
    Recursively convert numpy scalars/arrays, fractions, tuples and sets
    into plain JSON types. Infinite floats become the string "inf".
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Fraction):
        obj = float(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return None
        return value
    return obj


def popcount(values: np.ndarray) -> np.ndarray:
    """SWAR popcount of a non-negative int64 array"""
    v = values.astype(np.uint64)
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((v * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def ratio(numerator: float, denominator: float) -> float:
    """numerator/denominator with 0/0 read as no coverage (0.0)"""
    if denominator == 0:
        return 0.0 if numerator == 0 else math.inf
    return numerator / denominator
