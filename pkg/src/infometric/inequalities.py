"""Exhaustive (or seeded sampled) checks of the triangle and join inequalities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lengths import DistanceTable, LengthFn, d_table, sigma_table
from .monoid import Monoid
from .numeric import to_work, tolerance

SAMPLE_THRESHOLD = 64
SAMPLE_SIZE = 10**5
_CHUNK = 2**21


@dataclass(frozen=True)
class Flag:
    """Outcome of one inequality; ``holds is None`` means it was not evaluated."""

    holds: bool | None
    witness: tuple | None = None

    def __bool__(self):
        return bool(self.holds)


def _search(viol, n, arity, sample=None, seed=0):
    """First index tuple where ``viol`` is true, or ``None``.

    ``viol`` takes ``arity`` broadcastable index arrays and returns booleans.
    """
    if sample is not None:
        rng = np.random.default_rng(seed)
        idx = [rng.integers(0, n, sample) for _ in range(arity)]
        hits = np.flatnonzero(np.broadcast_to(viol(*idx), (sample,)))
        return tuple(int(a[hits[0]]) for a in idx) if len(hits) else None
    rest = [np.arange(n).reshape((1,) * (k + 1) + (n,) + (1,) * (arity - k - 2))
            for k in range(arity - 1)]
    chunk = max(1, _CHUNK // max(1, n ** (arity - 1)))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        first = np.arange(start, stop).reshape((-1,) + (1,) * (arity - 1))
        bad = np.broadcast_to(viol(first, *rest), (stop - start,) + (n,) * (arity - 1))
        hit = np.argwhere(bad)
        if len(hit):
            h = hit[0]
            return (start + int(h[0]),) + tuple(int(v) for v in h[1:])
    return None


def _flag(m, witness):
    if witness is None:
        return Flag(True)
    return Flag(False, tuple(m.elements[i] for i in witness))


@dataclass(frozen=True)
class TableReport:
    """Inequalities of a single table ``t``.

    ``delta``: ``t(x,z) <= t(x,y) + t(y,z)``; ``second_delta``:
    ``|t(x,z) - t(z,y)| <= t(x,y)``; ``nabla``: ``t(x v y, a v b) <= t(x,a) + t(y,b)``;
    ``weak_nabla``: ``t(x v z, y v z) <= t(x,y)``; ``very_weak_nabla``: the weak
    form restricted to ``x <= y``.
    """

    delta: Flag
    second_delta: Flag
    nabla: Flag
    weak_nabla: Flag
    very_weak_nabla: Flag
    sampled: bool = False

    @property
    def delta_holds(self):
        return self.delta.holds

    @property
    def second_delta_holds(self):
        return self.second_delta.holds

    @property
    def nabla_holds(self):
        return self.nabla.holds

    @property
    def weak_nabla_holds(self):
        return self.weak_nabla.holds

    @property
    def very_weak_nabla_holds(self):
        return self.very_weak_nabla.holds

    @property
    def is_pseudometric(self):
        return bool(self.delta.holds)


def _table_flags(m: Monoid, D, tol, sample, seed):
    n = len(m)
    J, leq = m.table, m.leq_matrix
    s3 = sample if n > SAMPLE_THRESHOLD else None
    delta = _search(lambda x, y, z: D[x, z] > D[x, y] + D[y, z] + tol, n, 3, s3, seed)
    second = _search(lambda x, y, z: abs(D[x, z] - D[z, y]) > D[x, y] + tol, n, 3, s3, seed + 1)
    nabla = _search(lambda x, y, a, b: D[J[x, y], J[a, b]] > D[x, a] + D[y, b] + tol,
                    n, 4, s3, seed + 2)
    weak = _search(lambda x, y, z: D[J[x, z], J[y, z]] > D[x, y] + tol, n, 3, s3, seed + 3)
    very_weak = _search(lambda x, y, z: leq[x, y] & (D[J[x, z], J[y, z]] > D[x, y] + tol),
                        n, 3, s3, seed + 4)
    return TableReport(_flag(m, delta), _flag(m, second), _flag(m, nabla), _flag(m, weak),
                       _flag(m, very_weak), sampled=s3 is not None)


def check_table(t: DistanceTable, sample: int = SAMPLE_SIZE, seed: int = 0) -> TableReport:
    """Evaluate every inequality on a raw table.

    Exhaustive up to :data:`SAMPLE_THRESHOLD` elements, seeded random tuples beyond.
    """
    (D,), scale = to_work(t.values)
    return _table_flags(t.monoid, D, tolerance(scale), sample, seed)


def satisfies_delta(t: DistanceTable) -> bool:
    (D,), scale = to_work(t.values)
    tol = tolerance(scale)
    return _search(lambda x, y, z: D[x, z] > D[x, y] + D[y, z] + tol, len(t.monoid), 3) is None


def satisfies_nabla(t: DistanceTable) -> bool:
    (D,), scale = to_work(t.values)
    J, tol = t.monoid.table, tolerance(scale)
    return _search(lambda x, y, a, b: D[J[x, y], J[a, b]] > D[x, a] + D[y, b] + tol,
                   len(t.monoid), 4) is None


@dataclass(frozen=True)
class InequalityReport:
    """Everything :func:`check_inequalities` learns about one length function.

    ``d`` and ``sigma`` hold the raw table checks; ``delta_increasing`` and
    ``intersection_increasing`` are left unevaluated for nonmonotone input.
    """

    mode: str
    d: TableReport
    sigma: TableReport
    delta_increasing: Flag
    intersection_increasing: Flag

    @property
    def delta_holds(self):
        return self.d.delta_holds

    @property
    def nabla_holds(self):
        return self.d.nabla_holds

    @property
    def weak_nabla_holds(self):
        return self.d.weak_nabla_holds

    @property
    def very_weak_nabla_holds(self):
        return self.d.very_weak_nabla_holds

    @property
    def second_delta_holds(self):
        return self.d.second_delta_holds

    @property
    def sampled(self):
        return self.d.sampled

    def equivalent_flags(self) -> dict:
        """The six mutually equivalent properties for a monotone length function.

        (a) very weak join inequality of ``d``; (b) the same for ``sigma``;
        (c) ``delta_y`` increasing; (d) intersection measure increasing;
        (e) triangle inequality of ``sigma``; (f) join inequality of ``sigma``.
        """
        if self.mode != "monotone":
            raise ValueError("the equivalence needs a monotone length function")
        return {
            "a": self.d.very_weak_nabla,
            "b": self.sigma.very_weak_nabla,
            "c": self.delta_increasing,
            "d": self.intersection_increasing,
            "e": self.sigma.delta,
            "f": self.sigma.nabla,
        }

    def all_hold(self) -> bool:
        flags = [self.d.delta, self.d.second_delta, self.d.nabla, self.d.weak_nabla,
                 self.d.very_weak_nabla, self.sigma.delta, self.sigma.second_delta,
                 self.sigma.nabla, self.sigma.weak_nabla, self.sigma.very_weak_nabla]
        if self.mode == "monotone":
            flags += [self.delta_increasing, self.intersection_increasing]
        return all(f.holds for f in flags)

    def summary(self) -> dict:
        out = {}
        for name, rep in (("d", self.d), ("sigma", self.sigma)):
            for field in ("delta", "second_delta", "nabla", "weak_nabla", "very_weak_nabla"):
                out[f"{field}_{name}"] = getattr(rep, field)
        out["delta_increasing"] = self.delta_increasing
        out["intersection_increasing"] = self.intersection_increasing
        return out


def check_inequalities(length: LengthFn, sample: int = SAMPLE_SIZE, seed: int = 0) -> InequalityReport:
    """Evaluate the triangle/join inequalities of ``d`` and ``sigma`` and the
    monotonicity of ``delta`` and of the intersection measure.

    In nonmonotone mode only the raw table inequalities are computed.
    """
    m = length.monoid
    n = len(m)
    (L, Dd, Ds), scale = to_work(length.values, d_table(length), sigma_table(length))
    tol = tolerance(scale)
    rep_d = _table_flags(m, Dd, tol, sample, seed)
    rep_s = _table_flags(m, Ds, tol, sample, seed + 10)
    if length.mode != "monotone":
        return InequalityReport(length.mode, rep_d, rep_s, Flag(None), Flag(None))
    J, leq = m.table, m.leq_matrix
    s = sample if n > SAMPLE_THRESHOLD else None
    # delta_y(x) = l(x) - l(x v y); zeta(x & y) = l(x) + l(y) - l(x v y)
    inc = _search(lambda a, x, y: leq[a, x] & (L[a] - L[J[a, y]] > L[x] - L[J[x, y]] + tol),
                  n, 3, s, seed + 20)
    Z = L[:, None] + L[None, :] - L[J]
    inter = _search(lambda a, b, x, y: leq[a, x] & leq[b, y] & (Z[a, b] > Z[x, y] + tol),
                    n, 4, s, seed + 21)
    return InequalityReport(length.mode, rep_d, rep_s, _flag(m, inc), _flag(m, inter))
