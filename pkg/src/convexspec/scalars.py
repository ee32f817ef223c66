"""Scalar handling for the two arithmetic modes.

Exact models carry :class:`fractions.Fraction` values, float models carry
finite Python floats. A model never mixes the two.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

Scalar = Union[Fraction, float]

# rounding slack used wherever "exactly 1" has to be judged on floats
FLOAT_EPS = 1e-12
DEFAULT_FLOAT_TOL = 1e-9


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    return mode


def to_exact(value) -> Fraction:
    """Convert `value` to a Fraction.

    Accepts Fractions, ints, strings such as ``"3"``, ``"-2/3"`` or ``"0.25"``
    and finite floats (converted exactly, so 0.1 is *not* 1/10).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in exact mode")
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def to_float(value) -> float:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        value = Fraction(value.strip())
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"non-finite value {value!r} in float mode")
    return out


def convert(value, mode: str) -> Scalar:
    return to_exact(value) if mode == EXACT else to_float(value)


def vector(values: Iterable, mode: str) -> tuple:
    return tuple(convert(v, mode) for v in values)


def parse_vector(text: str, mode: str) -> tuple:
    """Parse a comma separated list such as ``"0,1/2,-3"``."""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise ValueError("empty vector")
    return vector(parts, mode)


def format_scalar(value):
    """JSON-friendly form: exact values become ``"a/b"`` strings."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return float(value)


def format_vector(values: Sequence) -> list:
    return [format_scalar(v) for v in values]


def zero(mode: str) -> Scalar:
    return Fraction(0) if mode == EXACT else 0.0


def one(mode: str) -> Scalar:
    return Fraction(1) if mode == EXACT else 1.0


def is_one(value: Scalar, mode: str) -> bool:
    if mode == EXACT:
        return value == 1
    return abs(value - 1.0) <= FLOAT_EPS


def close(a: Scalar, b: Scalar, mode: str, tol=None) -> bool:
    if mode == EXACT and tol is None:
        return a == b
    return abs(a - b) <= (FLOAT_EPS if tol is None else tol)


def sup_norm(x: Sequence, y: Sequence = None):
    if y is None:
        return max((abs(a) for a in x), default=0)
    return max((abs(a - b) for a, b in zip(x, y)), default=0)


def dot(p: Sequence, x: Sequence):
    return sum((a * b for a, b in zip(p, x) if a), start=0 * x[0] if x else 0)
