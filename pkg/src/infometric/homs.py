"""Join-preserving maps, hom monoids, operator lengths and small categories.

A hom ``U: S -> Q`` satisfies ``U(x v y) = U(x) v U(y)``; it need not send the
neutral element to the neutral element.  The homs between two monoids form
an idempotent monoid themselves under the pointwise join, with the constant
map onto the neutral element as its neutral element.

Composition follows the usual convention: ``compose(U, V)`` is ``U o V``,
i.e. ``V`` is applied first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .closures import _delta_kernel, _nabla_kernel
from .lengths import DistanceTable, LengthFn, bar, d_table, sigma_table, validate_length
from .monoid import Monoid, UnknownElement, monoid_violations
from .numeric import TOL, as_values, from_work, is_exact, to_work

ENUM_LIMIT = 10**6


class NotJoinPreserving(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"join not preserved at {witness}")


class Mismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


class NotClosed(ValueError):
    pass


class PremiseFails(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"bound fails on the comparable pair {witness}")


class CategoryError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(map(str, self.problems)))


# -- homs ---------------------------------------------------------------------

class Hom:
    """A join-preserving map, stored as the tuple of target indices of the source elements."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: Monoid, target: Monoid, images):
        self.source = source
        self.target = target
        self.map = tuple(int(i) for i in images)

    def __call__(self, label):
        return self.target.elements[self.map[self.source.idx(label)]]

    def __eq__(self, other):
        if not isinstance(other, Hom):
            return NotImplemented
        return self.map == other.map and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"Hom({self.label})"

    @property
    def unital(self) -> bool:
        return self.map[self.source.neutral_index] == self.target.neutral_index

    @property
    def label(self) -> str:
        return "<" + ";".join(self.target.elements[i] for i in self.map) + ">"

    @property
    def is_bijective(self) -> bool:
        return len(set(self.map)) == len(self.map) == len(self.target)

    def as_dict(self) -> dict:
        return {x: self.target.elements[i] for x, i in zip(self.source.elements, self.map)}


def _join_witness(source, target, images):
    J, K = source.table, target.table
    img = np.asarray(images)
    bad = np.argwhere(img[J] != K[img[:, None], img[None, :]])
    if len(bad):
        i, j = bad[0]
        return source.elements[i], source.elements[j]
    return None


def validate_hom(source: Monoid, target: Monoid, mapping) -> Hom:
    """Build a hom from a dict ``label -> label``, a sequence of target labels
    in source order, or a callable; raises :class:`NotJoinPreserving`."""
    if callable(mapping):
        images = [mapping(x) for x in source.elements]
    elif isinstance(mapping, dict):
        missing = [x for x in source.elements if x not in mapping]
        if missing:
            raise Mismatch(f"no image for {missing[0]!r}")
        images = [mapping[x] for x in source.elements]
    else:
        images = list(mapping)
        if len(images) != len(source):
            raise Mismatch(f"expected {len(source)} images, got {len(images)}")
    idx = [target.idx(y) for y in images]
    w = _join_witness(source, target, idx)
    if w is not None:
        raise NotJoinPreserving(w)
    return Hom(source, target, idx)


def identity(m: Monoid) -> Hom:
    return Hom(m, m, range(len(m)))


def constant(source: Monoid, target: Monoid, label) -> Hom:
    return Hom(source, target, [target.idx(label)] * len(source))


def translation(m: Monoid, a) -> Hom:
    """``T_a(x) = x v a``; unital only when ``a`` is the neutral element."""
    return Hom(m, m, m.table[:, m.idx(a)])


def hom_join(U: Hom, V: Hom) -> Hom:
    if U.source != V.source or U.target != V.target:
        raise Mismatch("pointwise join needs a common source and target")
    K = U.target.table
    return Hom(U.source, U.target, [K[a, b] for a, b in zip(U.map, V.map)])


def compose(U: Hom, V: Hom) -> Hom:
    """``U o V`` (apply ``V`` first)."""
    if V.target != U.source:
        raise Mismatch("target of the right factor must be the source of the left factor")
    return Hom(V.source, U.target, [U.map[i] for i in V.map])


def inverse(U: Hom):
    """Inverse map of a bijective hom (itself a hom), or ``None``."""
    if not U.is_bijective:
        return None
    inv = [0] * len(U.map)
    for i, j in enumerate(U.map):
        inv[j] = i
    return Hom(U.target, U.source, inv)


def enumerate_homs(source: Monoid, target: Monoid, limit: int = ENUM_LIMIT) -> list:
    """All join-preserving maps, in lexicographic order of their image tuples.

    Refuses when the number of candidate maps ``|target| ** |source|`` exceeds
    ``limit``.  Candidates are built element by element and abandoned as soon
    as an already decided join is violated.
    """
    n, k = len(source), len(target)
    if k**n > limit:
        raise TooLarge(f"{k}**{n} candidate maps exceeds the limit {limit}")
    J, K = source.table.tolist(), target.table.tolist()
    img = [-1] * n
    out = []
    # constraints img[r] = img[j] v img[k] become decidable once max(j, k, r) is assigned
    ready = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            r = J[a][b]
            ready[max(a, b, r)].append((a, b, r))

    def ok(i):
        return all(K[img[a]][img[b]] == img[r] for a, b, r in ready[i])

    def fill(i):
        if i == n:
            out.append(Hom(source, target, img))
            return
        for y in range(k):
            img[i] = y
            if ok(i):
                fill(i + 1)
        img[i] = -1

    fill(0)
    return out


def hom_monoid(homs) -> Monoid:
    """The homs as a monoid under pointwise join, labelled by :attr:`Hom.label`.

    The list must be closed under join and contain the constant neutral map.
    """
    homs = list(homs)
    if not homs:
        raise NotClosed("empty hom set")
    pos = {h.map: i for i, h in enumerate(homs)}
    K = homs[0].target.table
    maps = np.array([h.map for h in homs], dtype=np.intp)
    n = len(homs)
    table = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        joined = K[maps[i][None, :], maps]
        for j in range(n):
            key = tuple(joined[j].tolist())
            if key not in pos:
                raise NotClosed(f"join of {homs[i].label} and {homs[j].label} is missing")
            table[i, j] = pos[key]
    eps = tuple([homs[0].target.neutral_index] * len(homs[0].source))
    if eps not in pos:
        raise NotClosed("constant neutral map is missing")
    labels = [h.label for h in homs]
    problems = monoid_violations(labels, labels[pos[eps]], table)
    if problems:
        raise CategoryError(problems)
    return Monoid(labels, labels[pos[eps]], table)


# -- operator lengths ---------------------------------------------------------

def ell_prime(U: Hom, dS: DistanceTable, dQ: DistanceTable):
    """Least ``M >= 0`` with ``dQ(Ux, Uy) <= M dS(x, y)``; ``inf`` when some
    ``dS(x, y) = 0`` has ``dQ(Ux, Uy) > 0``."""
    if dS.monoid != U.source or dQ.monoid != U.target:
        raise Mismatch("tables must live on the source and target of the hom")
    img = np.asarray(U.map)
    num = dQ.values[img[:, None], img[None, :]]
    den = dS.values
    exact = is_exact(num) and is_exact(den)
    best = Fraction(0) if exact else 0.0
    for a, b in zip(num.ravel(), den.ravel()):
        if b == 0 or (not exact and abs(b) <= TOL):
            if a > (0 if exact else TOL):
                return math.inf
            continue
        r = a / b
        if r > best:
            best = r
    return best


def hom_length(homs, ell_values) -> LengthFn:
    """Monotone length on the hom monoid: ``l(U) = min_V l'(U v V)``.

    ``ell_values`` lists ``l'`` in the order of ``homs`` and must be finite.
    """
    m = hom_monoid(homs)
    if any(isinstance(v, float) and math.isinf(v) for v in ell_values):
        raise ValueError("remove homs with infinite operator length first")
    raw = LengthFn(m, as_values(list(ell_values)), "nonmonotone")
    return bar(raw)


# -- categories ----------------------------------------------------------------

class Category:
    """Finitely many monoids with hom sets closed under composition and join.

    ``homsets[(a, b)]`` lists homs ``a -> b``.  ``lengths[(a, b)]`` (optional)
    gives one value per hom and ``tables[(a, b)]`` a distance table on the hom
    monoid; missing tables default to ``d`` of the lengths.  ``object_tables``
    optionally carries a distance table per object, used for operator lengths.
    """

    def __init__(self, objects: dict, homsets: dict, lengths=None, tables=None,
                 object_tables=None):
        self.objects = dict(objects)
        self.names = tuple(self.objects)
        self.homsets = {}
        for a in self.names:
            for b in self.names:
                hs = homsets.get((a, b))
                if hs is None:
                    raise NotClosed(f"hom set {a} -> {b} is missing")
                hs = list(hs)
                for h in hs:
                    if h.source != self.objects[a] or h.target != self.objects[b]:
                        raise Mismatch(f"{h.label} does not map {a} -> {b}")
                self.homsets[(a, b)] = tuple(hs)
        self.index = {key: {h.map: i for i, h in enumerate(hs)} for key, hs in self.homsets.items()}
        self.monoids = {key: hom_monoid(hs) for key, hs in self.homsets.items()}
        self.comp = {}
        for a, b, c in itertools.product(self.names, repeat=3):
            left, right = self.homsets[(b, c)], self.homsets[(a, b)]
            target = self.index[(a, c)]
            tab = np.empty((len(left), len(right)), dtype=np.intp)
            for i, U in enumerate(left):
                for j, V in enumerate(right):
                    key = tuple(U.map[k] for k in V.map)
                    if key not in target:
                        raise NotClosed(f"{U.label} o {V.label} is missing from {a} -> {c}")
                    tab[i, j] = target[key]
            self.comp[(a, b, c)] = tab
        self.object_tables = dict(object_tables or {})
        self.lengths = None
        self.tables = None
        if lengths is not None:
            self.lengths, self.tables = self._attach(lengths, tables)

    def _attach(self, lengths, tables):
        ls, ts = {}, {}
        for key, m in self.monoids.items():
            v = lengths[key]
            if isinstance(v, LengthFn):
                v = v.values
            elif isinstance(v, dict):
                v = [v[h.label] for h in self.homsets[key]]
            ls[key] = validate_length(m, as_values(list(v))).values
            if tables is not None and key in tables:
                t = tables[key]
                t = t if isinstance(t, DistanceTable) else DistanceTable(m, t)
                ts[key] = t.values
            else:
                ts[key] = d_table(LengthFn(m, ls[key]))
        return ls, ts

    def with_lengths(self, lengths, tables=None) -> Category:
        out = object.__new__(Category)
        out.__dict__.update(self.__dict__)
        out.lengths, out.tables = self._attach(lengths, tables)
        return out

    def hom(self, a, b, index) -> Hom:
        return self.homsets[(a, b)][index]

    def position(self, a, b, hom: Hom) -> int:
        return self.index[(a, b)][hom.map]

    def length_fn(self, a, b) -> LengthFn:
        return LengthFn(self.monoids[(a, b)], self.lengths[(a, b)])

    def table(self, a, b) -> DistanceTable:
        return DistanceTable(self.monoids[(a, b)], self.tables[(a, b)], check=False)

    def identity_index(self, a) -> int:
        return self.index[(a, a)][tuple(range(len(self.objects[a])))]

    def validate(self) -> list:
        """Structural problems: identities, distribution laws (empty list when sound)."""
        problems = []
        for a in self.names:
            if tuple(range(len(self.objects[a]))) not in self.index[(a, a)]:
                problems.append(("MissingIdentity", a))
        for a, b, c in itertools.product(self.names, repeat=3):
            C = self.comp[(a, b, c)]
            Jbc, Jab, Jac = (self.monoids[k].table for k in ((b, c), (a, b), (a, c)))
            # (U v V) o X = U o X v V o X
            lhs = C[Jbc]                                   # [U, V, X]
            rhs = Jac[C[:, None, :], C[None, :, :]]
            if not np.array_equal(lhs, rhs):
                problems.append(("LeftDistribution", (a, b, c)))
            # Y o (U v V) = Y o U v Y o V
            lhs = C[:, Jab]                                # [Y, U, V]
            rhs = Jac[C[:, :, None], C[:, None, :]]
            if not np.array_equal(lhs, rhs):
                problems.append(("RightDistribution", (a, b, c)))
        return problems


def auto_category(objects: dict, object_tables=None, limit: int = ENUM_LIMIT) -> Category:
    """Every hom between every pair of objects.

    With ``object_tables`` the homs with infinite operator length are dropped.
    """
    homsets = {}
    for a, A in objects.items():
        for b, B in objects.items():
            hs = enumerate_homs(A, B, limit)
            if object_tables is not None:
                hs = [h for h in hs if ell_prime(h, object_tables[a], object_tables[b]) != math.inf]
            homsets[(a, b)] = hs
    cat = Category(objects, homsets, object_tables=object_tables)
    problems = cat.validate()
    if problems:
        raise CategoryError(problems)
    return cat


def ell_prime_values(cat: Category, a, b) -> list:
    """Operator lengths of the homs ``a -> b`` against the object tables."""
    dS, dQ = cat.object_tables[a], cat.object_tables[b]
    return [ell_prime(h, dS, dQ) for h in cat.homsets[(a, b)]]


def derived_lengths(cat: Category) -> dict:
    """Per hom set ``min_V l'(U v V)`` from the object tables."""
    return {key: hom_length(cat.homsets[key], ell_prime_values(cat, *key)) for key in cat.homsets}


def pointwise_lengths(cat: Category, object_lengths: dict, weights=None) -> dict:
    """``l(U) = sum_x w(x) l_b(U x)`` over the source elements (``w = 1`` by default).

    A nonnegative combination of monotone subadditive functions of the images,
    hence a monotone length on each hom monoid.
    """
    out = {}
    for (a, b), hs in cat.homsets.items():
        Lb = object_lengths[b].values
        w = [1] * len(cat.objects[a]) if weights is None else [weights[a][x] for x in cat.objects[a]]
        out[(a, b)] = [sum((wx * Lb[i] for wx, i in zip(w, h.map)), Fraction(0)) for h in hs]
    return out


# -- product closure -------------------------------------------------------------

def _layout(cat: Category):
    keys = list(cat.homsets)
    off, n = {}, 0
    for key in keys:
        off[key] = n
        n += len(cat.homsets[key]) ** 2
    return keys, off, n


def _edges(cat: Category, lengths):
    """Edges ``(U, V) -> (A o U, A o V)`` and ``(U, V) -> (U o B, V o B)`` with factor
    ``l(A)`` resp. ``l(B)``."""
    keys, off, n = _layout(cat)
    src, dst, wt = [], [], []
    for (c, d) in keys:
        h1 = len(cat.homsets[(c, d)])
        base = off[(c, d)] + np.arange(h1 * h1)
        for e in cat.names:
            C = cat.comp[(c, d, e)]                  # [A, U] -> A o U
            h2 = len(cat.homsets[(c, e)])
            for A in range(C.shape[0]):
                r = C[A]
                src.append(base)
                dst.append(off[(c, e)] + (r[:, None] * h2 + r[None, :]).ravel())
                wt.append(np.full(h1 * h1, lengths[(d, e)][A], dtype=object))
        for f in cat.names:
            C = cat.comp[(f, c, d)]                  # [U, B] -> U o B
            h2 = len(cat.homsets[(f, d)])
            for B in range(C.shape[1]):
                r = C[:, B]
                src.append(base)
                dst.append(off[(f, d)] + (r[:, None] * h2 + r[None, :]).ravel())
                wt.append(np.full(h1 * h1, lengths[(f, c)][B], dtype=object))
    return keys, off, n, np.concatenate(src), np.concatenate(dst), np.concatenate(wt)


def _flatten(cat, keys, tables):
    return np.concatenate([np.asarray(tables[k], dtype=object).ravel() for k in keys])


def _unflatten(cat, keys, off, flat):
    out = {}
    for k in keys:
        h = len(cat.homsets[k])
        out[k] = flat[off[k]:off[k] + h * h].reshape(h, h)
    return out


def _numeric(flat, factor):
    """int64 when every value is an integer, float64 when any is a float, else object."""
    vals = list(flat) + list(factor)
    if any(isinstance(v, float) for v in vals):
        return flat.astype(float), factor.astype(float), "float"
    if all(v.denominator == 1 for v in vals) and max((abs(v) for v in vals), default=0) < 2**31:
        return (np.array([int(v) for v in flat], dtype=np.int64),
                np.array([int(v) for v in factor], dtype=np.int64), "int")
    return flat, factor, "object"


def _relax(D, src, dst, factor, rounds, kind):
    """Synchronous rounds of ``D[dst] = min(D[dst], factor * D[src])``.

    Returns ``(D, stable)``.  Products of integers can only grow beyond the
    current maximum, where they never win, so they are clipped before
    multiplying to keep int64 safe.
    """
    top = D.max() if len(D) else 0
    for _ in range(rounds):
        old = D
        s = old[src]
        cand = s * np.minimum(factor, top + 1) if kind == "int" else s * factor
        new = old.copy()
        np.minimum.at(new, dst, cand)
        if kind == "float":
            stable = np.all(np.abs(new - old) <= TOL)
        else:
            stable = np.array_equal(new, old)
        D = new
        if stable:
            return D, True
    return D, False


def _product_close(cat, lengths, tables, max_factors=None):
    keys, off, n, src, dst, factor = _edges(cat, lengths)
    flat = _flatten(cat, keys, tables)
    D, f, kind = _numeric(flat, factor)
    if max_factors is not None:
        D, _ = _relax(D, src, dst, f, max_factors, kind)
    else:
        D, stable = _relax(D, src, dst, f, n + 1, kind)
        if not stable:
            # some cycle of factors has product < 1: its values tend to zero,
            # and so does everything reachable from it
            D2, _ = _relax(D, src, dst, f, 1, kind)
            moving = np.asarray(D2 != D) if kind != "float" else np.abs(D2 - D) > TOL
            while True:
                grown = moving.copy()
                grown[dst[moving[src]]] = True
                if np.array_equal(grown, moving):
                    break
                moving = grown
            D = D2.copy()
            D[moving] = 0
    if kind == "int":
        D = np.array([Fraction(int(v)) for v in D], dtype=object)
    return _unflatten(cat, keys, off, D)


def product_closure(cat: Category, max_factors=None) -> dict:
    """Least table below ``d`` obeying both product inequalities.

    Entry ``(X, Y)`` is the infimum of ``l(A1)...l(An) d(U, V) l(B1)...l(Bm)``
    over ``X = A1...An U B1...Bm`` and ``Y = A1...An V B1...Bm``.  Computed by
    single-factor relaxation until stable; ``max_factors`` stops after that
    many rounds, which covers exactly the factorizations with ``n + m`` at
    most ``max_factors``.
    """
    if cat.lengths is None:
        raise ValueError("category has no lengths attached")
    raw = _product_close(cat, cat.lengths, cat.tables, max_factors)
    return {k: DistanceTable(cat.monoids[k], v, "custom", check=False) for k, v in raw.items()}


def brute_force_product_closure(cat: Category, max_factors: int = 3) -> dict:
    """Enumeration of factorizations with ``n + m <= max_factors``.

    First the cheapest word of exactly ``k`` factors is recorded for every
    composite map (``k <= max_factors``).  Then every pair ``(U, V)`` is
    multiplied on the right by all composites of ``m`` factors, and the
    result on the left by all composites of ``n <= max_factors - m`` factors.
    Costs are nonnegative, so minimizing per stage loses nothing.
    """
    if cat.lengths is None:
        raise ValueError("category has no lengths attached")
    names = cat.names
    L = cat.lengths

    # words[k][(a, b)] = {composite index in hom(a, b): least cost of a k-factor word}
    words = [{(a, a): {None: Fraction(1)} for a in names}]
    for k in range(1, max_factors + 1):
        layer = {}
        for (a, b), prev in words[-1].items():
            for c in names:
                slot = layer.setdefault((a, c), {})
                for h in range(len(cat.homsets[(b, c)])):
                    cost_h = L[(b, c)][h]
                    for X, cost in prev.items():
                        comp = h if X is None else int(cat.comp[(a, b, c)][h, X])
                        v = cost * cost_h
                        if comp not in slot or v < slot[comp]:
                            slot[comp] = v
        words.append(layer)

    def table(key):
        return np.array([[v for v in row] for row in np.asarray(cat.tables[key], dtype=object)],
                        dtype=object)

    # right[m][(f, d)]: least cost using at most m right factors
    right = [{key: table(key) for key in cat.homsets}]
    for m in range(1, max_factors + 1):
        cur = {key: t.copy() for key, t in right[-1].items()}
        for (c, d) in cat.homsets:
            D = table((c, d))
            idx = np.arange(len(cat.homsets[(c, d)]))
            for f in names:
                out = cur[(f, d)]
                h = len(cat.homsets[(f, d)])
                for B, cb in words[m].get((f, c), {}).items():
                    r = cat.comp[(f, c, d)][idx, B]                 # U o B
                    pos = (r[:, None] * h + r[None, :]).ravel()
                    np.minimum.at(out.reshape(-1), pos, (D * cb).ravel())
        right.append(cur)

    best = {key: t.copy() for key, t in right[max_factors].items()}
    for n in range(1, max_factors + 1):
        for (f, d), R in right[max_factors - n].items():
            idx = np.arange(len(cat.homsets[(f, d)]))
            for e in names:
                out = best[(f, e)]
                h = len(cat.homsets[(f, e)])
                for A, ca in words[n].get((d, e), {}).items():
                    r = cat.comp[(f, d, e)][A, idx]                  # A o X
                    pos = (r[:, None] * h + r[None, :]).ravel()
                    np.minimum.at(out.reshape(-1), pos, (ca * R).ravel())
    return {k: DistanceTable(cat.monoids[k], v, "custom", check=False) for k, v in best.items()}


# -- product inequalities -----------------------------------------------------------

def product_violations(cat: Category, lengths=None, tables=None, max_witnesses: int = 10) -> list:
    """Failures of ``t(U o X, V o X) <= t(U, V) l(X)``, ``t(X o U, X o V) <= l(X) t(U, V)``
    and ``l(U o V) <= l(U) l(V)`` across all composable hom sets."""
    lengths = cat.lengths if lengths is None else lengths
    tables = cat.tables if tables is None else tables
    out = []
    for a, b, c in itertools.product(cat.names, repeat=3):
        C = cat.comp[(a, b, c)]
        Lab, Lbc, Lac = (np.asarray(lengths[k], dtype=object) for k in ((a, b), (b, c), (a, c)))
        Tab, Tbc, Tac = (np.asarray(tables[k], dtype=object) for k in ((a, b), (b, c), (a, c)))
        for U, X in np.argwhere(Lac[C] > Lbc[:, None] * Lab[None, :])[:max_witnesses]:
            out.append(("length", (b, c, int(U)), (a, b, int(X))))
        # right factor X in hom(a, b), U, V in hom(b, c)
        for X in range(C.shape[1]):
            r = C[:, X]
            bad = np.argwhere(Tac[np.ix_(r, r)] > Tbc * Lab[X])
            for U, V in bad[:max_witnesses]:
                out.append(("right", (b, c, int(U), int(V)), (a, b, X)))
        # left factor Y in hom(b, c), U, V in hom(a, b)
        for Y in range(C.shape[0]):
            r = C[Y]
            bad = np.argwhere(Tac[np.ix_(r, r)] > Lbc[Y] * Tab)
            for U, V in bad[:max_witnesses]:
                out.append(("left", (b, c, Y), (a, b, int(U), int(V))))
    return out


def product_flags(cat: Category, lengths=None) -> tuple:
    """Whether ``d`` and ``sigma`` of the hom-set lengths satisfy the two
    table product inequalities; the two answers should coincide."""
    lengths = cat.lengths if lengths is None else lengths
    dt, st = {}, {}
    for key, m in cat.monoids.items():
        ln = LengthFn(m, lengths[key])
        dt[key], st[key] = d_table(ln), sigma_table(ln)
    kinds = ("left", "right")
    d_ok = not [v for v in product_violations(cat, lengths, dt) if v[0] in kinds]
    s_ok = not [v for v in product_violations(cat, lengths, st) if v[0] in kinds]
    return d_ok, s_ok


# -- fixed point on hom sets ------------------------------------------------------

@dataclass
class HomFixpointResult:
    lengths: dict
    tables: dict
    iterations: int
    converged: bool
    changes: list

    def length_fn(self, cat, a, b) -> LengthFn:
        return LengthFn(cat.monoids[(a, b)], self.lengths[(a, b)])


def _closed_tables(cat, lengths, tables):
    dotted = _product_close(cat, lengths, tables)
    out = {}
    for key, D in dotted.items():
        J = cat.monoids[key].table
        (W,), scale = to_work(D)
        out[key] = from_work(_delta_kernel(_nabla_kernel(W, J)), scale)
    return out


def hom_ideal_length(cat: Category, tol=TOL, max_iter: int = 1000) -> HomFixpointResult:
    """Iterate product closure, join closure and chain closure on every hom set,
    read lengths off the distance to the constant neutral map, make them
    monotone, rebuild ``d``; stop when no table changes."""
    from .fixpoint import NotConverged

    if cat.lengths is None:
        raise ValueError("category has no lengths attached")
    lengths = dict(cat.lengths)
    tables = {k: d_table(LengthFn(cat.monoids[k], v)) for k, v in lengths.items()}
    changes = []
    for it in range(1, max_iter + 1):
        closed = _closed_tables(cat, lengths, tables)
        new_l, new_t = {}, {}
        change = 0
        for key, T in closed.items():
            m = cat.monoids[key]
            lt = LengthFn(m, T[:, m.neutral_index], "nonmonotone")
            lb = bar(lt)
            new_l[key] = lb.values
            new_t[key] = d_table(lb)
            diff = np.abs(np.asarray(new_t[key], dtype=object) - np.asarray(tables[key], dtype=object))
            change = max(change, max(diff.ravel()) if diff.size else 0)
        changes.append(change)
        exact = all(is_exact(np.asarray(v)) for v in new_t.values())
        done = change == 0 if exact else change < tol
        lengths, tables = new_l, new_t
        if done:
            return HomFixpointResult(lengths, tables, it, True, changes)
    raise NotConverged(max_iter, changes[-1] if changes else None)


def quotient_category_violations(cat: Category, tables: dict) -> list:
    """Pairs with ``[X1] = [X2]``, ``[Y1] = [Y2]`` but ``[Y1 o X1] != [Y2 o X2]``."""
    out = []
    for a, b, c in itertools.product(cat.names, repeat=3):
        C = cat.comp[(a, b, c)]
        Zab = np.asarray(tables[(a, b)], dtype=object) == 0
        Zbc = np.asarray(tables[(b, c)], dtype=object) == 0
        Tac = np.asarray(tables[(a, c)], dtype=object)
        for X1, X2 in np.argwhere(Zab):
            for Y1, Y2 in np.argwhere(Zbc):
                if Tac[C[Y1, X1], C[Y2, X2]] != 0:
                    out.append(((a, b, int(X1), int(X2)), (b, c, int(Y1), int(Y2))))
    return out


# -- distance between objects --------------------------------------------------------

@dataclass(frozen=True)
class BanachMazur:
    value: float
    product: object
    witness: object

    def __float__(self):
        return self.value


def banach_mazur(cat: Category, a, b, lengths=None) -> BanachMazur:
    """``log min l(phi) l(phi^-1)`` over isomorphisms ``phi: a -> b`` whose
    inverse lies in the hom set ``b -> a``; ``+inf`` when there is none and
    ``-inf`` when the minimum product is zero."""
    lengths = cat.lengths if lengths is None else lengths
    if lengths is None:
        raise ValueError("no hom-set lengths available")
    best, witness = None, None
    for i, phi in enumerate(cat.homsets[(a, b)]):
        psi = inverse(phi)
        if psi is None or psi.map not in cat.index[(b, a)]:
            continue
        j = cat.index[(b, a)][psi.map]
        p = lengths[(a, b)][i] * lengths[(b, a)][j]
        if best is None or p < best:
            best, witness = p, phi
    if best is None:
        return BanachMazur(math.inf, None, None)
    if best == 0:
        return BanachMazur(-math.inf, best, witness)
    return BanachMazur(math.log(best), best, witness)


# -- uniform continuity ------------------------------------------------------------

@dataclass(frozen=True)
class LiftReport:
    all_pairs: bool
    closures: bool
    witness: object

    def __bool__(self):
        return self.all_pairs and self.closures


def uniform_continuity_lift(U: Hom, M, length_S: LengthFn, length_Q: LengthFn,
                            kind: str = "d") -> LiftReport:
    """From ``dQ(Ua, Ub) <= M dS(a, b)`` on comparable pairs ``a <= b`` to all pairs,
    and to the doubly closed tables.

    Tables are ``d`` (or ``sigma``) of the two length functions; both are
    determined by their values on comparable pairs, which is what makes the
    lift valid.  Raises :class:`PremiseFails` when the premise is false.
    """
    from .closures import tiha

    if length_S.monoid != U.source or length_Q.monoid != U.target:
        raise Mismatch("length functions must live on the source and target")
    if kind not in ("d", "sigma"):
        raise ValueError("kind must be 'd' or 'sigma'")
    M = Fraction(M) if not isinstance(M, float) else M
    table = d_table if kind == "d" else sigma_table
    S, Q = U.source, U.target
    dS = table(length_S)
    dQ = table(length_Q)
    img = np.asarray(U.map)
    pulled = dQ[img[:, None], img[None, :]]
    bound = M * dS
    leq = S.leq_matrix
    bad = np.argwhere(leq & (pulled > bound))
    if len(bad):
        i, j = bad[0]
        raise PremiseFails((S.elements[i], S.elements[j]))
    bad = np.argwhere(pulled > bound)
    witness = None
    all_ok = not len(bad)
    if not all_ok:
        witness = tuple(S.elements[k] for k in bad[0])
    cS = tiha(S, DistanceTable(S, dS, check=False)).values
    cQ = tiha(Q, DistanceTable(Q, dQ, check=False)).values
    bad = np.argwhere(cQ[img[:, None], img[None, :]] > M * cS)
    closed_ok = not len(bad)
    if not closed_ok and witness is None:
        witness = tuple(S.elements[k] for k in bad[0])
    return LiftReport(all_ok, closed_ok, witness)
