"""Length functions and the distance candidates derived from them."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .monoid import Monoid, UnknownElement, Violation
from .numeric import TOL, as_values, exact, is_exact, values_equal

MODES = ("monotone", "nonmonotone")


class LengthError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class TableError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class BadP(ValueError):
    pass


def _gt(a, b):
    """Strict ``a > b`` for exact values, ``a > b + TOL`` for floats."""
    if isinstance(a, float) or isinstance(b, float):
        return a > b + TOL
    return a > b


class LengthFn:
    """Per-element nonnegative values ``l(x)`` on a monoid.

    ``mode`` is ``"monotone"`` (the usual setting, ``l(x) <= l(x v y)``) or
    ``"nonmonotone"`` (subadditive only).  The mode also selects the formula
    used for the derived distances, see :func:`d_table`.
    """

    __slots__ = ("monoid", "values", "mode")

    def __init__(self, monoid: Monoid, values, mode: str = "monotone"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        values = as_values(values)
        if values.shape != (len(monoid),):
            raise ValueError(f"expected {len(monoid)} values, got shape {values.shape}")
        values.setflags(write=False)
        self.monoid = monoid
        self.values = values
        self.mode = mode

    def __getitem__(self, label):
        return self.values[self.monoid.idx(label)]

    def __repr__(self):
        return f"LengthFn({self.as_dict()!r}, mode={self.mode!r})"

    def __eq__(self, other):
        if not isinstance(other, LengthFn):
            return NotImplemented
        return self.monoid == other.monoid and values_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.monoid, tuple(self.values)))

    @property
    def is_exact(self) -> bool:
        return is_exact(self.values)

    def as_dict(self) -> dict:
        return dict(zip(self.monoid.elements, self.values))

    def with_mode(self, mode) -> LengthFn:
        return LengthFn(self.monoid, self.values, mode)

    def scaled(self, factor) -> LengthFn:
        return LengthFn(self.monoid, self.values * exact(factor), self.mode)

    def __add__(self, other):
        if not isinstance(other, LengthFn) or other.monoid != self.monoid:
            return NotImplemented
        mode = "monotone" if self.mode == other.mode == "monotone" else "nonmonotone"
        return LengthFn(self.monoid, self.values + other.values, mode)


def length_violations(m: Monoid, values, mode: str = "monotone", max_witnesses: int = 20):
    values = as_values(values)
    J = m.table
    found = []
    for i in np.flatnonzero(values < 0)[:max_witnesses]:
        found.append(Violation("Negative", (m.elements[i],)))
    e = m.neutral_index
    if values[e] != 0:
        found.append(Violation("NeutralNonzero", (m.elements[e],)))
    joined = values[J]
    tol = 0 if is_exact(values) else TOL
    over = joined > values[:, None] + values[None, :] + tol
    pairs = [tuple(p) for p in np.argwhere(over) if p[0] <= p[1]]
    for i, j in pairs[:max_witnesses]:
        found.append(Violation("NotSubadditive", (m.elements[i], m.elements[j])))
    if mode == "monotone":
        below = values[:, None] > joined + tol
        for i, j in np.argwhere(below)[:max_witnesses]:
            found.append(Violation("NotMonotone", (m.elements[i], m.elements[j])))
    return found


def validate_length(m: Monoid, values, mode: str = "monotone") -> LengthFn:
    """Check the length axioms for the requested mode and wrap the values.

    ``values`` is a mapping label -> number or a sequence in element order.
    Raises :class:`LengthError` carrying every violation with witnesses.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if isinstance(values, dict):
        unknown = [k for k in values if k not in m.index]
        if unknown:
            raise UnknownElement(unknown[0])
        missing = [e for e in m.elements if e not in values]
        if missing:
            raise LengthError([Violation("MissingValue", (missing[0],))])
        values = [values[e] for e in m.elements]
    values = as_values(values)
    if values.shape != (len(m),):
        raise LengthError([Violation("WrongCount", (len(values), len(m)))])
    violations = length_violations(m, values, mode)
    if violations:
        raise LengthError(violations)
    return LengthFn(m, values, mode)


class DistanceTable:
    """Symmetric, nonnegative, zero-diagonal table of values on a monoid.

    ``kind`` records where the table came from (``"d"``, ``"sigma"``,
    ``"sigma_p"``, ``"closed-delta"``, ``"closed-nabla"``, ``"closed-both"``
    or ``"custom"``); it is informational only.
    """

    __slots__ = ("monoid", "values", "kind", "p")

    def __init__(self, monoid: Monoid, values, kind: str = "custom", p=None, check: bool = True):
        values = values if isinstance(values, np.ndarray) and values.dtype in (object, np.float64) \
            else as_values(values)
        n = len(monoid)
        if values.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} table, got shape {values.shape}")
        if check:
            problems = table_violations(monoid, values)
            if problems:
                raise TableError(problems)
        values.setflags(write=False)
        self.monoid = monoid
        self.values = values
        self.kind = kind
        self.p = p

    def __call__(self, x, y):
        m = self.monoid
        return self.values[m.idx(x), m.idx(y)]

    def __repr__(self):
        return f"DistanceTable(kind={self.kind!r}, n={len(self.monoid)})"

    def __eq__(self, other):
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.monoid == other.monoid and values_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.monoid, tuple(self.values.ravel())))

    @property
    def is_exact(self) -> bool:
        return is_exact(self.values)

    def lengths(self) -> np.ndarray:
        """Values ``t(x, neutral)`` extracted as a length candidate."""
        return self.values[:, self.monoid.neutral_index].copy()

    def extract_length(self, mode: str = "nonmonotone") -> LengthFn:
        return LengthFn(self.monoid, self.lengths(), mode)

    def leq(self, other: DistanceTable) -> bool:
        """Entrywise ``self <= other``."""
        return not bool(np.any(_gt_array(self.values, other.values)))


def _gt_array(a, b):
    if is_exact(a) and is_exact(b):
        return a > b
    return np.asarray(a, float) > np.asarray(b, float) + TOL


def table_violations(m: Monoid, values, max_witnesses: int = 20):
    values = np.asarray(values)
    found = []
    labels = m.elements
    tol = 0 if is_exact(values) else TOL
    for i, j in np.argwhere(values < -tol)[:max_witnesses]:
        found.append(Violation("Negative", (labels[i], labels[j])))
    asym = values != values.T if is_exact(values) else np.abs(values - values.T) > tol
    for i, j in [p for p in np.argwhere(asym) if p[0] < p[1]][:max_witnesses]:
        found.append(Violation("NotSymmetric", (labels[i], labels[j])))
    diag = np.diagonal(values)
    for i in np.flatnonzero(diag != 0 if is_exact(values) else np.abs(diag) > tol)[:max_witnesses]:
        found.append(Violation("NonzeroDiagonal", (labels[i],)))
    return found


# -- distance candidates -----------------------------------------------------

def d_table(length: LengthFn) -> np.ndarray:
    L, J = length.values, length.monoid.table
    if length.mode == "monotone":
        return L[J] - np.minimum(L[:, None], L[None, :])
    up = L[J]
    return np.maximum(np.abs(up - L[:, None]), np.abs(up - L[None, :]))


def sigma_table(length: LengthFn, p=1) -> np.ndarray:
    p = _check_p(p)
    L, J = length.values, length.monoid.table
    if p == 1:
        if length.mode == "monotone":
            return 2 * L[J] - L[:, None] - L[None, :]
        up = L[J]
        return np.abs(up - L[:, None]) + np.abs(up - L[None, :])
    up = np.asarray(L[J], float)
    a = np.abs(up - np.asarray(L, float)[:, None])
    b = np.abs(up - np.asarray(L, float)[None, :])
    if math.isinf(p):
        return np.maximum(a, b)
    return (a**p + b**p) ** (1.0 / p)


def _check_p(p):
    if isinstance(p, float) and math.isinf(p):
        return p
    p = exact(p)
    if p < 1:
        raise BadP(f"p must be >= 1, got {p}")
    return p


def d_of(length: LengthFn, x, y):
    """``l(x v y) - min(l(x), l(y))``; in nonmonotone mode the larger of the two
    absolute increments ``|l(x v y) - l(x)|``, ``|l(x v y) - l(y)|``."""
    m = length.monoid
    i, j = m.idx(x), m.idx(y)
    L = length.values
    up = L[m.table[i, j]]
    if length.mode == "monotone":
        return up - min(L[i], L[j])
    return max(abs(up - L[i]), abs(up - L[j]))


def sigma_of(length: LengthFn, x, y, p=1):
    """``2 l(x v y) - l(x) - l(y)`` for ``p = 1``; the ``p``-norm of the two
    increments for general ``p >= 1`` (returned as a float unless ``p == 1``)."""
    p = _check_p(p)
    m = length.monoid
    i, j = m.idx(x), m.idx(y)
    L = length.values
    up = L[m.table[i, j]]
    a, b = abs(up - L[i]), abs(up - L[j])
    if p == 1:
        return a + b
    if math.isinf(p):
        return float(max(a, b))
    if a == 0 and b == 0:
        return 0.0
    return float((float(a) ** p + float(b) ** p) ** (1.0 / float(p)))


def delta_fn(length: LengthFn, y, x):
    """``delta_y(x) = l(x) - l(x v y)``."""
    m = length.monoid
    i = m.idx(x)
    return length.values[i] - length.values[m.table[i, m.idx(y)]]


def distance_table(length: LengthFn, kind: str = "d", p=1) -> DistanceTable:
    """Materialize ``d``, ``sigma`` or ``sigma_p`` as a full table."""
    if kind == "d":
        return DistanceTable(length.monoid, d_table(length), "d", check=False)
    if kind in ("sigma", "sigma_p"):
        p = _check_p(p)
        values = sigma_table(length, p)
        kind = "sigma" if p == 1 else "sigma_p"
        return DistanceTable(length.monoid, values, kind, p=p, check=False)
    raise ValueError(f"unknown kind {kind!r}")


def bar(length: LengthFn) -> LengthFn:
    """Monotone envelope ``min_z l(x v z)``."""
    L, J = length.values, length.monoid.table
    return LengthFn(length.monoid, L[J].min(axis=1), "monotone")


def bar_values(values: np.ndarray, m: Monoid) -> np.ndarray:
    return values[m.table].min(axis=1)


def is_monotone(length: LengthFn) -> bool:
    return not length_violations(length.monoid, length.values, "monotone")


def counting_length(m: Monoid) -> LengthFn:
    """Cardinality of set labels such as ``{1,2}``; only for set-labelled monoids."""
    sizes = []
    for label in m.elements:
        inner = label.strip()[1:-1].strip()
        sizes.append(Fraction(len([t for t in inner.split(",") if t.strip()])))
    return validate_length(m, sizes)
