"""Metric quotient: identify elements at distance zero."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inequalities import _search
from .lengths import DistanceTable, LengthFn, is_monotone
from .monoid import Monoid, MonoidError, monoid_violations
from .numeric import to_work, tolerance


class NotPseudometric(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"triangle inequality fails at {witness}")


class NoNablaInequality(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"join inequality fails at {witness}")


@dataclass(frozen=True)
class QuotientResult:
    """``classes`` lists the members of each class (representative first).

    ``quotient`` is labelled by representatives, ``projection`` maps every
    element label to its representative, ``metric`` is the induced table and
    ``induced_length`` its distance to the neutral class.
    """

    classes: tuple
    quotient: Monoid
    metric: DistanceTable
    projection: dict
    induced_length: LengthFn

    @property
    def is_trivial(self) -> bool:
        return all(len(c) == 1 for c in self.classes)


def quotient(m: Monoid, t: DistanceTable) -> QuotientResult:
    """Quotient of ``m`` by ``t(x, y) = 0``.

    Requires ``t`` to satisfy the triangle and join inequalities (checked
    exhaustively); the first makes zero distance an equivalence, the second
    makes the join and ``t`` itself well defined on classes.  Representatives
    are the lexicographically least labels.
    """
    if t.monoid != m:
        raise ValueError("table belongs to a different monoid")
    n = len(m)
    J = m.table
    (D,), scale = to_work(t.values)
    tol = tolerance(scale)
    w = _search(lambda x, y, z: D[x, z] > D[x, y] + D[y, z] + tol, n, 3)
    if w is not None:
        raise NotPseudometric(tuple(m.elements[i] for i in w))
    w = _search(lambda x, y, a, b: D[J[x, y], J[a, b]] > D[x, a] + D[y, b] + tol, n, 4)
    if w is not None:
        raise NoNablaInequality(tuple(m.elements[i] for i in w))

    zero = D <= tol
    cls = np.full(n, -1)
    groups = []
    for i in range(n):
        if cls[i] < 0:
            members = np.flatnonzero(zero[i])
            cls[members] = len(groups)
            groups.append(members)
    labels = m.elements
    reps = [min((labels[i] for i in g)) for g in groups]
    rep_idx = [m.idx(r) for r in reps]
    QJ = cls[J[np.ix_(rep_idx, rep_idx)]]
    # every representative choice must give the same class and the same value
    if not np.array_equal(cls[J], QJ[np.ix_(cls, cls)]):
        raise NoNablaInequality(("join is not compatible with the zero classes",))
    QD = t.values[np.ix_(rep_idx, rep_idx)]
    if np.any(np.abs(D - D[np.ix_(rep_idx, rep_idx)][np.ix_(cls, cls)]) > tol):
        raise NotPseudometric(("distance depends on the representative",))
    e = cls[m.neutral_index]
    problems = monoid_violations(reps, reps[e], QJ)
    if problems:
        raise MonoidError(problems)
    qm = Monoid(reps, reps[e], QJ)
    metric = DistanceTable(qm, QD.copy(), t.kind, t.p, check=False)
    lengths = QD[:, e].copy()
    induced = LengthFn(qm, lengths, "nonmonotone")
    if is_monotone(induced):
        induced = induced.with_mode("monotone")
    classes = tuple(tuple([reps[k]] + sorted(labels[i] for i in g if labels[i] != reps[k]))
                    for k, g in enumerate(groups))
    projection = {labels[i]: reps[cls[i]] for i in range(n)}
    return QuotientResult(classes, qm, metric, projection, induced)
