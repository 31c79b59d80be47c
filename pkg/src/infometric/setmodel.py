"""Weighted finite sets under union: the reference model with closed-form distances.

For a union-closed family with additive measure ``mu``, the length ``l = mu``
gives ``d(A, B) = max(mu(A - B), mu(B - A))`` and
``sigma(A, B) = mu(A - B) + mu(B - A)``.  These are computed here straight
from set differences and serve as oracles for the generic code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolean import Atom, Complement, Difference, Intersection, One, Union, Zero, parse_bool_expr
from .lengths import LengthFn, validate_length
from .monoid import Monoid, UnknownElement, from_masks, union_closure

MAX_POINTS = 16


class NegativeWeight(ValueError):
    pass


class UnknownSet(KeyError):
    pass


class UnsupportedComplement(ValueError):
    pass


@dataclass(frozen=True)
class SetInstance:
    """Points with weights and a union-closed family (as frozensets of points)."""

    universe: tuple
    weights: dict
    family: tuple
    monoid: Monoid
    length: LengthFn

    def measure(self, s) -> Fraction:
        return sum((self.weights[p] for p in s), Fraction(0))

    def set_of(self, label) -> frozenset:
        """The member of the family carrying ``label`` (or given as a collection of points)."""
        if isinstance(label, str):
            try:
                return self.family[self.monoid.idx(label)]
            except UnknownElement:
                raise UnknownSet(label) from None
        s = frozenset(label)
        if s not in self.family:
            raise UnknownSet(label)
        return s

    def label_of(self, s) -> str:
        return self.monoid.elements[self.family.index(frozenset(s))]


def build_set_instance(sets, weights=None) -> SetInstance:
    """Close ``sets`` under union, add the empty set, and build the monoid and ``l = mu``.

    ``weights`` maps points to nonnegative rationals (default 1 for every point).
    Labels are ``{p,q,...}`` with points in sorted order.
    """
    sets = [frozenset(s) for s in sets]
    points = set().union(*sets) if sets else set()
    if weights is not None:
        points |= set(weights)
    universe = tuple(sorted(points, key=lambda p: (str(type(p)), p)))
    if len(universe) > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points are supported")
    w = {p: Fraction(1) for p in universe}
    if weights is not None:
        for p, v in weights.items():
            v = Fraction(v)
            if v < 0:
                raise NegativeWeight(f"weight of {p!r} is {v}")
            w[p] = v
    pos = {p: i for i, p in enumerate(universe)}
    masks = [sum(1 << pos[p] for p in s) for s in sets]
    closed = sorted(union_closure(masks), key=lambda x: (bin(x).count("1"), x))
    m = from_masks(closed, [str(p) for p in universe])
    family = tuple(frozenset(p for i, p in enumerate(universe) if mask >> i & 1) for mask in closed)
    values = [sum((w[p] for p in s), Fraction(0)) for s in family]
    length = validate_length(m, values)
    return SetInstance(universe, w, family, m, length)


def oracle_d(inst: SetInstance, a, b) -> Fraction:
    A, B = inst.set_of(a), inst.set_of(b)
    return max(inst.measure(A - B), inst.measure(B - A))


def oracle_sigma(inst: SetInstance, a, b) -> Fraction:
    A, B = inst.set_of(a), inst.set_of(b)
    return inst.measure(A - B) + inst.measure(B - A)


def realize(inst: SetInstance, expr) -> frozenset:
    """The subset of the universe an expression denotes.

    Complements are only meaningful relative to something: they are accepted
    as the right side of a difference or as members of an intersection that
    also has an uncomplemented member.
    """
    if isinstance(expr, str):
        expr = parse_bool_expr(expr, inst.monoid)
    if isinstance(expr, Atom):
        return inst.set_of(expr.label)
    if isinstance(expr, Zero):
        return frozenset()
    if isinstance(expr, (One, Complement)):
        raise UnsupportedComplement(f"cannot realize {expr} without an enclosing set")
    if isinstance(expr, Union):
        return frozenset().union(*(realize(inst, c) for c in expr.children))
    if isinstance(expr, Difference):
        if isinstance(expr.right, Complement):
            return realize(inst, expr.left) & realize(inst, expr.right.child)
        return realize(inst, expr.left) - realize(inst, expr.right)
    if isinstance(expr, Intersection):
        plain = [c for c in expr.children if not isinstance(c, Complement)]
        negated = [c.child for c in expr.children if isinstance(c, Complement)]
        if not plain:
            raise UnsupportedComplement(f"cannot realize {expr} without an enclosing set")
        out = frozenset.intersection(*(realize(inst, c) for c in plain))
        for c in negated:
            out -= realize(inst, c)
        return out
    raise TypeError(f"not an expression: {expr!r}")


def oracle_zeta(inst: SetInstance, expr) -> Fraction:
    """Measure of the realized set."""
    return inst.measure(realize(inst, expr))


def oracle_tables(inst: SetInstance):
    """Full ``d`` and ``sigma`` tables from set differences."""
    fam = inst.family
    n = len(fam)
    d = np.empty((n, n), dtype=object)
    s = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            a, b = inst.measure(fam[i] - fam[j]), inst.measure(fam[j] - fam[i])
            d[i, j], s[i, j] = max(a, b), a + b
    return d, s


def random_set_instance(seed: int, max_points: int = 6, max_members: int = 32,
                        max_weight: int = 5) -> SetInstance:
    """Seeded random instance: up to ``max_points`` points with integer weights
    in ``0..max_weight`` and a union-closed family of at most ``max_members`` sets."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_points + 1))
    weights = {p: int(rng.integers(0, max_weight + 1)) for p in range(1, k + 1)}
    family = {0}
    for _ in range(int(rng.integers(1, 2 * k + 1))):
        mask = int(rng.integers(1, 2**k))
        grown = union_closure(list(family) + [mask])
        if len(grown) > max_members:
            break
        family = grown
    sets = [[p for p in range(1, k + 1) if mask >> (p - 1) & 1] for mask in family]
    return build_set_instance(sets, weights)

