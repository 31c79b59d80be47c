"""Exact-by-default number handling.

Values are kept as :class:`fractions.Fraction` whenever every input is
rational, and fall back to ``float64`` (compared with an absolute tolerance)
as soon as one input is a float.  Bulk kernels run on integer arrays obtained
by scaling with the common denominator, which keeps them exact and fast.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

TOL = 1e-9

# int64 headroom: kernels add at most a handful of table entries together.
_INT_LIMIT = 2**58


def exact(value):
    """Coerce a scalar to ``Fraction`` if it is rational, else to ``float``.

    Strings such as ``"3/2"`` or ``"0.25"`` are parsed as exact rationals.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return float(value)
    raise TypeError(f"cannot interpret {value!r} as a number")


def as_values(values) -> np.ndarray:
    """Object array of Fractions, or float64 array if any entry is a float."""
    arr = np.asarray(values, dtype=object)
    flat = [exact(v) for v in arr.ravel()]
    if any(isinstance(v, float) for v in flat):
        return np.array(flat, dtype=np.float64).reshape(arr.shape)
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = flat
    return out


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def to_work(*arrays: np.ndarray):
    """Map value arrays to a common numeric working representation.

    Returns ``(work_arrays, scale)``.  For exact input ``scale`` is the common
    denominator and the work arrays are int64 (or object, when the scaled
    integers would not fit).  For float input ``scale`` is ``None``.
    """
    if not all(is_exact(a) for a in arrays):
        return [np.asarray(a, dtype=np.float64) for a in arrays], None
    scale = 1
    for a in arrays:
        for v in a.ravel():
            scale = math.lcm(scale, v.denominator)
    scaled = [a * scale for a in arrays]
    biggest = max((abs(int(v)) for a in scaled for v in a.ravel()), default=0)
    if biggest < _INT_LIMIT:
        return [np.array([int(v) for v in a.ravel()], dtype=np.int64).reshape(a.shape)
                for a in scaled], scale
    ints = []
    for a in scaled:
        out = np.empty(a.shape, dtype=object)
        out.ravel()[:] = [int(v) for v in a.ravel()]
        ints.append(out)
    return ints, scale


def from_work(work: np.ndarray, scale) -> np.ndarray:
    if scale is None:
        return np.asarray(work, dtype=np.float64)
    out = np.empty(work.shape, dtype=object)
    out.ravel()[:] = [Fraction(int(v), scale) for v in work.ravel()]
    return out


def tolerance(scale) -> float:
    """Slack for ``<=`` comparisons in work units (zero for exact data)."""
    return 0 if scale is not None else TOL


def values_equal(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    if is_exact(a) and is_exact(b):
        return bool(np.all(a == b))
    return bool(np.all(np.abs(np.asarray(a, float) - np.asarray(b, float)) <= TOL))


def max_abs_diff(a: np.ndarray, b: np.ndarray):
    if a.size == 0:
        return Fraction(0)
    diff = np.abs(a - b)
    return max(diff.ravel())


def render(value, as_float: bool = False) -> str:
    """Text form used in reports: ``p/q`` for exact values."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if as_float:
        return repr(float(value))
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
