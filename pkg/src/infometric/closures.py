"""Forced triangle and join inequalities.

``delta_closure`` is the largest table below ``t`` that satisfies the triangle
inequality (infimum over chains), ``nabla_closure`` the largest one that
satisfies the join inequality (infimum over join decompositions), and
``tiha`` applies the join closure first and the chain closure second.
"""

from __future__ import annotations

import itertools

import numpy as np

from .lengths import DistanceTable
from .monoid import Monoid
from .numeric import from_work, to_work

_CHUNK = 2**21


class InstanceTooLarge(ValueError):
    pass


def _delta_kernel(D):
    D = D.copy()
    n = D.shape[0]
    while True:
        before = D.copy()
        for k in range(n):
            D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
        if np.array_equal(before, D):
            return D


def _nabla_kernel(D, J):
    n = D.shape[0]
    D = D.copy()
    chunk = max(1, _CHUNK // (n**3))
    while True:
        new = D.copy()
        for start in range(0, n, chunk):
            stop = min(n, start + chunk)
            # candidate for (x1 v x2, y1 v y2) is D[x1, y1] + D[x2, y2]
            cand = D[start:stop, :, None, None] + D[None, None, :, :]
            rows = np.broadcast_to(J[start:stop, None, :, None], cand.shape)
            cols = np.broadcast_to(J[None, :, None, :], cand.shape)
            np.minimum.at(new, (rows, cols), cand)
        if np.array_equal(new, D):
            return D
        D = new


def delta_closure(t: DistanceTable) -> DistanceTable:
    """Infimum over chains ``x, a1, ..., an, y`` of the summed table values."""
    (D,), scale = to_work(t.values)
    out = from_work(_delta_kernel(D), scale)
    return DistanceTable(t.monoid, out, "closed-delta", check=False)


def nabla_closure(m: Monoid, t: DistanceTable) -> DistanceTable:
    """Infimum over decompositions ``x = x1 v ... v xn``, ``y = y1 v ... v yn``
    of ``t(x1, y1) + ... + t(xn, yn)``, computed by binary relaxation."""
    if t.monoid != m:
        raise ValueError("table belongs to a different monoid")
    (D,), scale = to_work(t.values)
    out = from_work(_nabla_kernel(D, m.table), scale)
    return DistanceTable(m, out, "closed-nabla", check=False)


def tiha(m: Monoid, t: DistanceTable) -> DistanceTable:
    """Join closure followed by chain closure; satisfies both inequalities."""
    (D,), scale = to_work(t.values)
    out = from_work(_delta_kernel(_nabla_kernel(D, m.table)), scale)
    return DistanceTable(m, out, "closed-both", check=False)


def hat_of_tilde(m: Monoid, t: DistanceTable) -> DistanceTable:
    """Chain closure first, then join closure (diagnostic variant only)."""
    (D,), scale = to_work(t.values)
    out = from_work(_nabla_kernel(_delta_kernel(D), m.table), scale)
    return DistanceTable(m, out, "custom", check=False)


# -- brute-force oracles ------------------------------------------------------

def brute_force_delta(t: DistanceTable, max_chain=None):
    """Enumerate chains of distinct intermediate points explicitly."""
    m = t.monoid
    n = len(m)
    (V,), scale = to_work(t.values)
    V = V.tolist()
    max_chain = n if max_chain is None else max_chain
    out = [row[:] for row in V]
    for x in range(n):
        for y in range(n):
            best = V[x][y]
            others = [a for a in range(n) if a not in (x, y)]
            for k in range(1, min(max_chain, len(others)) + 1):
                for chain in itertools.permutations(others, k):
                    cost = V[x][chain[0]] + V[chain[-1]][y]
                    for i in range(len(chain) - 1):
                        cost += V[chain[i]][chain[i + 1]]
                    if cost < best:
                        best = cost
            out[x][y] = best
    return from_work(np.array(out, dtype=object), scale)


def brute_force_nabla(m: Monoid, t: DistanceTable, max_parts=None):
    """Enumerate sets of distinct pairs ``(x_i, y_i)`` and record the cheapest set
    for every pair of joins ``(x1 v ... v xn, y1 v ... v yn)``.

    Only irredundant sets are visited (every member raises one of the two
    running joins); dropping a redundant member never increases the cost
    because all table values are nonnegative.
    """
    n = len(m)
    J, leq = m.table.tolist(), m.leq_matrix.tolist()
    (V,), scale = to_work(t.values)
    V = V.tolist()
    pairs = [(a, b) for a in range(n) for b in range(n)]
    max_parts = n * n if max_parts is None else max_parts
    best = {}

    def visit(start, x, y, cost, depth):
        if (x, y) not in best or cost < best[(x, y)]:
            best[(x, y)] = cost
        if depth == max_parts:
            return
        for k in range(start, len(pairs)):
            a, b = pairs[k]
            if leq[a][x] and leq[b][y]:
                continue
            visit(k + 1, J[x][a], J[y][b], cost + V[a][b], depth + 1)

    for k, (a, b) in enumerate(pairs):
        visit(k + 1, a, b, V[a][b], 1)
    out = np.empty((n, n), dtype=object)
    for (x, y), cost in best.items():
        out[x, y] = cost
    return from_work(out, scale)


def brute_force_closures(m: Monoid, t: DistanceTable, max_chain=None, max_parts=None,
                         limit: int = 8):
    """Independent oracles for :func:`delta_closure` and :func:`nabla_closure`.

    Returns ``(tilde, hat)`` as tables.  Refuses monoids with more than
    ``limit`` elements.
    """
    if len(m) > limit:
        raise InstanceTooLarge(f"{len(m)} elements; brute force is limited to {limit}")
    tilde = brute_force_delta(t, max_chain)
    hat = brute_force_nabla(m, t, max_parts)
    return (DistanceTable(m, tilde, "closed-delta", check=False),
            DistanceTable(m, hat, "closed-nabla", check=False))
