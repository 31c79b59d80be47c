"""Iterated projection onto ideal length functions.

Each round closes the current distance table under both inequalities,
reads a new length off the distances to the neutral element, makes it
monotone with :func:`~infometric.lengths.bar` (skipped for the nonmonotone
variant) and rebuilds the distance table from it.  All arithmetic runs on
integer work arrays when the input is rational, so termination on a grid
is detected by exact repetition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .closures import _delta_kernel, _nabla_kernel, tiha
from .inequalities import check_table
from .lengths import DistanceTable, LengthFn, distance_table
from .monoid import Monoid
from .numeric import TOL, from_work, to_work

VARIANTS = ("d", "sigma", "nonmono")
MAX_ITER = 10_000
WINDOW = 1000


class NotConverged(RuntimeError):
    def __init__(self, max_iter, change):
        self.max_iter = max_iter
        self.change = change
        super().__init__(f"no convergence after {max_iter} iterations (last change {change})")


def _dist_work(L, J, variant):
    up = L[J]
    if variant == "d":
        return up - np.minimum(L[:, None], L[None, :])
    if variant == "sigma":
        return 2 * up - L[:, None] - L[None, :]
    a, b = np.abs(up - L[:, None]), np.abs(up - L[None, :])
    return np.maximum(a, b)


def _values(work, scale):
    return from_work(work, scale)


@dataclass
class FixpointStep:
    """One round ``n``: current length and table, their closure, and the next round's pair."""

    n: int
    scale: object
    _length: np.ndarray
    _table: np.ndarray
    _closed: np.ndarray
    _next_length: np.ndarray
    _next_table: np.ndarray
    change: object
    closed_is_own_d: bool

    @property
    def length(self):
        return _values(self._length, self.scale)

    @property
    def table(self):
        return _values(self._table, self.scale)

    @property
    def closed(self):
        return _values(self._closed, self.scale)

    @property
    def closed_length(self):
        return _values(self._closed[:, self._e], self.scale)

    @property
    def next_length(self):
        return _values(self._next_length, self.scale)

    @property
    def next_table(self):
        return _values(self._next_table, self.scale)

    _e: int = 0


@dataclass
class FixpointTrace:
    variant: str
    monoid: Monoid
    steps: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    dropped: int = 0

    @property
    def complete(self) -> bool:
        return self.dropped == 0


@dataclass
class FixpointResult:
    length: LengthFn
    table: DistanceTable
    trace: FixpointTrace
    ratio_min: object = None
    ratio_mean: object = None

    def __iter__(self):
        return iter((self.length, self.table, self.trace))


def _start(start, variant):
    if isinstance(start, LengthFn):
        m = start.monoid
        if variant in ("d", "sigma") and start.mode != "monotone":
            raise ValueError("the d and sigma variants need a monotone length function")
        (L,), scale = to_work(start.values)
        return m, L, None, scale, start.values
    if isinstance(start, DistanceTable):
        m = start.monoid
        (D,), scale = to_work(start.values)
        return m, D[:, m.neutral_index].copy(), D, scale, start.lengths()
    raise TypeError("start must be a LengthFn or a DistanceTable")


def ideal_length(start, variant: str = "d", tol=TOL, max_iter: int = MAX_ITER,
                 window: int = WINDOW) -> FixpointResult:
    """Iterate to the ideal length function.

    ``start`` is a length function (the first table is its ``d``, ``sigma``
    or nonmonotone ``d``) or an arbitrary distance table.  Exact input stops
    on exact repetition of the table; float input stops once the largest
    entrywise change drops below ``tol``.  Unpacks as ``(length, table, trace)``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    m, L, D, scale, initial = _start(start, variant)
    J, e = m.table, m.neutral_index
    if D is None:
        D = _dist_work(L, J, variant)
    exact = scale is not None
    trace = FixpointTrace(variant, m)
    steps = deque(maxlen=max(1, min(window, WINDOW)))
    change = None
    for n in range(1, max_iter + 1):
        T = _delta_kernel(_nabla_kernel(D, J))
        lt = T[:, e]
        newL = lt.copy() if variant == "nonmono" else lt[J].min(axis=1)
        newD = _dist_work(newL, J, variant)
        change = np.abs(newD - D).max() if D.size else 0
        own = _dist_work(lt, J, "nonmono")
        steps.append(FixpointStep(n, scale, L, D, T, newL, newD,
                                  Fraction(int(change), scale) if exact else float(change),
                                  bool(np.array_equal(own, T) if exact else np.abs(own - T).max() <= TOL),
                                  _e=e))
        trace.iterations = n
        done = np.array_equal(newD, D) if exact else change < tol
        L, D = newL, newD
        if done:
            trace.converged = True
            break
    trace.steps = list(steps)
    trace.dropped = trace.iterations - len(trace.steps)
    if not trace.converged:
        raise NotConverged(max_iter, Fraction(int(change), scale) if exact else change)
    mode = "nonmonotone" if variant == "nonmono" else "monotone"
    length = LengthFn(m, from_work(L, scale), mode)
    kind = "sigma" if variant == "sigma" else "d"
    table = DistanceTable(m, from_work(D, scale), kind, check=False)
    rmin, rmean = _ratios(length.values, initial)
    return FixpointResult(length, table, trace, rmin, rmean)


def _ratios(final, initial):
    """Min and mean of ``final / initial`` over elements with positive initial value."""
    pos = [i for i in range(len(initial)) if initial[i] > 0]
    if not pos:
        return None, None
    r = [final[i] / initial[i] for i in pos]
    return min(r), sum(r) / len(r)


# -- invariants of a finished run --------------------------------------------

def descent_violations(trace: FixpointTrace) -> list:
    """Places where the iterates fail to descend.

    Lengths: ``l(n+1) <= closed length(n) <= l(n)`` for every variant.
    Tables (d variant only): ``d(n+1) <= closed(n) <= d(n)``.
    """
    out = []
    tol = 0 if trace.steps and trace.steps[0].scale is not None else TOL
    e = trace.monoid.neutral_index
    for s in trace.steps:
        lt = s._closed[:, e]
        for name, lo, hi in (("length:next>closed", s._next_length, lt),
                             ("length:closed>current", lt, s._length)):
            bad = np.flatnonzero(lo > hi + tol)
            if len(bad):
                out.append((s.n, name, trace.monoid.elements[bad[0]]))
        if trace.variant == "d":
            for name, lo, hi in (("table:next>closed", s._next_table, s._closed),
                                 ("table:closed>current", s._closed, s._table)):
                bad = np.argwhere(lo > hi + tol)
                if len(bad):
                    i, j = bad[0]
                    out.append((s.n, name, (trace.monoid.elements[i], trace.monoid.elements[j])))
    return out


@dataclass(frozen=True)
class FixedPointDiagnosis:
    holds: bool
    inequalities_hold: bool
    closure_unchanged: bool
    iteration_unchanged: bool

    @property
    def agree(self) -> bool:
        return self.inequalities_hold == self.closure_unchanged == self.iteration_unchanged

    def __bool__(self):
        return self.holds


def is_fixed_point(length: LengthFn) -> FixedPointDiagnosis:
    """Run the three equivalent tests: ``d`` satisfies both inequalities, the
    double closure leaves ``d`` unchanged, one iteration returns ``length``."""
    if length.mode != "monotone":
        raise ValueError("fixed-point test needs a monotone length function")
    m = length.monoid
    t = distance_table(length, "d")
    rep = check_table(t)
    ineq = bool(rep.delta_holds and rep.nabla_holds)
    unchanged = tiha(m, t) == t
    res = ideal_length(length, "d", max_iter=MAX_ITER)
    same = res.length == length
    return FixedPointDiagnosis(ineq and unchanged and same, ineq, unchanged, same)


@dataclass(frozen=True)
class BoundReport:
    holds: bool
    violations: tuple
    steps_checked: int
    limit_holds: bool


def sigma_variant_bounds(trace: FixpointTrace) -> BoundReport:
    """Check ``sigma(n+1)/2 <= closed(n) <= sigma(n)`` at every retained step,
    and ``sigma/2 <= closed(sigma) <= sigma`` at the limit."""
    if trace.variant != "sigma":
        raise ValueError("bounds apply to a sigma-variant trace")
    violations = []
    labels = trace.monoid.elements
    J = trace.monoid.table
    tol = 0 if trace.steps and trace.steps[0].scale is not None else TOL

    def compare(n, name, lo, hi):
        bad = np.argwhere(lo > hi + tol)
        if len(bad):
            i, j = bad[0]
            violations.append((n, name, (labels[i], labels[j])))

    # work arrays are scaled; multiply by 2 instead of halving to stay integral
    for s in trace.steps:
        compare(s.n, "lower", s._next_table, 2 * s._closed)
        compare(s.n, "upper", s._closed, s._table)
    n_before = len(violations)
    if trace.steps:
        last = trace.steps[-1]
        S = last._next_table
        C = _delta_kernel(_nabla_kernel(S, J))
        compare("limit", "lower", S, 2 * C)
        compare("limit", "upper", C, S)
    limit_ok = len(violations) == n_before
    return BoundReport(not violations, tuple(violations), len(trace.steps), limit_ok)
