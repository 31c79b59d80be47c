"""Signed measure ``zeta`` on free Boolean expressions over monoid elements.

Every expression is expanded into disjoint products of literals over the
atoms it mentions.  A product ``x1 & ... & xn & ~y1 & ... & ~ym`` is valued by
inclusion-exclusion over the positive atoms::

    zeta = sum over K subset of {x_i} of (-1)**(|K| + 1) * l(y v join(K))

with ``y = y1 v ... v ym``.  By convention ``zeta(0) = zeta(1) = 0``, so a
bare complement gets a negative value: ``zeta(~y) = -l(y)``.

Grammar (loosest binding first)::

    union  := diff ('|' diff)*
    diff   := inter ('\\' inter)*
    inter  := unary ('&' unary)*
    unary  := '~' unary | atom | '0' | '1' | '(' union ')'

Atoms are brace labels like ``{1,2}``, quoted labels (``"0"`` to reach an
element literally named 0) or bare words.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lengths import LengthFn
from .monoid import Monoid, UnknownElement
from .numeric import to_work

MAX_ATOMS = 16


class ExprSyntaxError(ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class TooManyAtoms(ValueError):
    pass


# -- expression tree ----------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    label: str

    def __str__(self):
        bare = _BARE.fullmatch(self.label) and self.label not in ("0", "1")
        if bare or re.fullmatch(r"\{[^{}]*\}", self.label):
            return self.label
        return f'"{self.label}"'


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Complement:
    child: object

    def __str__(self):
        return f"~{_wrap(self.child)}"


@dataclass(frozen=True)
class Union:
    children: tuple

    def __str__(self):
        return " | ".join(_wrap(c) for c in self.children)


@dataclass(frozen=True)
class Intersection:
    children: tuple

    def __str__(self):
        return " & ".join(_wrap(c) for c in self.children)


@dataclass(frozen=True)
class Difference:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left)} \\ {_wrap(self.right)}"


BoolExpr = (Atom, Zero, One, Complement, Union, Intersection, Difference)


def _wrap(e):
    return str(e) if isinstance(e, (Atom, Zero, One, Complement)) else f"({e})"


# -- parsing -----------------------------------------------------------------

_BARE = re.compile(r"[^\s&|\\~()'\"{}]+")


def _tokens(text):
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "&|\\~()":
            yield c, c, i
            i += 1
        elif c == "{":
            j = text.find("}", i)
            if j < 0:
                raise ExprSyntaxError("unclosed '{'", i)
            yield "atom", re.sub(r"\s+", "", text[i:j + 1]), i
            i = j + 1
        elif c in "'\"":
            j = text.find(c, i + 1)
            if j < 0:
                raise ExprSyntaxError("unclosed quote", i)
            yield "atom", text[i + 1:j], i
            i = j + 1
        else:
            mt = _BARE.match(text, i)
            if not mt:
                raise ExprSyntaxError(f"unexpected character {c!r}", i)
            word = mt.group()
            yield ("const" if word in ("0", "1") else "atom"), word, i
            i = mt.end()
    yield "end", None, n


class _Parser:
    def __init__(self, text, monoid):
        self.toks = list(_tokens(text))
        self.k = 0
        self.monoid = monoid

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.k += 1
        return tok

    def union(self):
        parts = [self.diff()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.diff())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def diff(self):
        left = self.inter()
        while self.peek()[0] == "\\":
            self.take()
            left = Difference(left, self.inter())
        return left

    def inter(self):
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Intersection(tuple(parts))

    def unary(self):
        kind, value, pos = self.peek()
        if kind == "~":
            self.take()
            return Complement(self.unary())
        if kind == "(":
            self.take()
            inner = self.union()
            self.take(")")
            return inner
        if kind == "const":
            self.take()
            return One() if value == "1" else Zero()
        if kind == "atom":
            self.take()
            if self.monoid is not None and value not in self.monoid:
                raise UnknownElement(value)
            return Atom(value)
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse_bool_expr(text: str, monoid: Monoid | None = None):
    """Parse ``text`` into an expression tree; with ``monoid`` every atom is checked."""
    p = _Parser(text, monoid)
    expr = p.union()
    p.take("end")
    return expr


def _coerce(expr, monoid):
    if isinstance(expr, str):
        return parse_bool_expr(expr, monoid)
    for a in atoms(expr):
        if a not in monoid:
            raise UnknownElement(a)
    return expr


def atoms(expr) -> tuple:
    """Distinct atom labels in order of first appearance."""
    seen = {}

    def walk(e):
        if isinstance(e, Atom):
            seen.setdefault(e.label, None)
        elif isinstance(e, Complement):
            walk(e.child)
        elif isinstance(e, (Union, Intersection)):
            for c in e.children:
                walk(c)
        elif isinstance(e, Difference):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return tuple(seen)


def truth_table(expr, order=None) -> np.ndarray:
    """Boolean vector over all ``2**k`` assignments; bit ``i`` of the index is atom ``order[i]``."""
    order = atoms(expr) if order is None else tuple(order)
    k = len(order)
    if k > MAX_ATOMS:
        raise TooManyAtoms(f"{k} distinct atoms; at most {MAX_ATOMS} are supported")
    idx = np.arange(2**k)
    pos = {a: i for i, a in enumerate(order)}

    def ev(e):
        if isinstance(e, Atom):
            return (idx >> pos[e.label]) & 1 == 1
        if isinstance(e, Zero):
            return np.zeros(2**k, bool)
        if isinstance(e, One):
            return np.ones(2**k, bool)
        if isinstance(e, Complement):
            return ~ev(e.child)
        if isinstance(e, Union):
            return np.logical_or.reduce([ev(c) for c in e.children])
        if isinstance(e, Intersection):
            return np.logical_and.reduce([ev(c) for c in e.children])
        if isinstance(e, Difference):
            return ev(e.left) & ~ev(e.right)
        raise TypeError(f"not an expression: {e!r}")

    return ev(expr)


# -- normal forms ------------------------------------------------------------

@dataclass(frozen=True)
class DisjointNormalForm:
    """Union of pairwise disjoint products; each term is ``(positive, negative)`` atom sets."""

    atoms: tuple
    terms: tuple = field(default_factory=tuple)

    def expand(self):
        """Expression equal (as a Boolean function) to the normal form."""
        if not self.terms:
            return Zero()
        prods = []
        for pos, neg in self.terms:
            lits = [Atom(a) for a in self.atoms if a in pos] + \
                   [Complement(Atom(a)) for a in self.atoms if a in neg]
            prods.append(One() if not lits else lits[0] if len(lits) == 1
                         else Intersection(tuple(lits)))
        return prods[0] if len(prods) == 1 else Union(tuple(prods))


def to_dnf(expr) -> DisjointNormalForm:
    """Full expansion: one term per satisfying assignment of the mentioned atoms."""
    order = atoms(expr)
    tt = truth_table(expr, order)
    terms = []
    for s in np.flatnonzero(tt):
        pos = frozenset(a for i, a in enumerate(order) if s >> i & 1)
        terms.append((pos, frozenset(order) - pos))
    return DisjointNormalForm(order, tuple(terms))


def shannon_dnf(expr) -> DisjointNormalForm:
    """Coarser disjoint form: split on one atom at a time and stop as soon as
    the expression is constant on the current cube, so terms may leave atoms free."""
    order = atoms(expr)
    tt = truth_table(expr, order)
    k = len(order)
    # cube[s] over remaining atoms order[i:], fixed literals in pos/neg
    terms = []

    def split(i, table, pos, neg):
        if table.all():
            terms.append((frozenset(pos), frozenset(neg)))
            return
        if not table.any():
            return
        # bit i of the original index is the lowest remaining bit after slicing
        split(i + 1, table[1::2], pos + [order[i]], neg)
        split(i + 1, table[0::2], pos, neg + [order[i]])

    if k == 0:
        return DisjointNormalForm(order, ((frozenset(), frozenset()),) if tt[0] else ())
    split(0, tt, [], [])
    return DisjointNormalForm(order, tuple(terms))


# -- evaluation ---------------------------------------------------------------

def _join_index(m: Monoid, labels):
    acc = m.neutral_index
    for a in labels:
        acc = m.table[acc, m.idx(a)]
    return acc


def product_zeta(length: LengthFn, positive, negative):
    """Inclusion-exclusion value of one product of literals, by explicit subset sum."""
    m = length.monoid
    L = length.values
    base = _join_index(m, negative)
    pos = list(positive)
    total = 0
    for k in range(len(pos) + 1):
        sign = 1 if k % 2 else -1
        for ks in itertools.combinations(pos, k):
            total += sign * L[m.table[base, _join_index(m, ks)]]
    return total


def minterm_values(length: LengthFn, order) -> np.ndarray:
    """``zeta`` of all ``2**k`` full products over ``order`` at once.

    Entry ``s`` is the product with atoms in bitmask ``s`` positive and the
    rest negative.  Uses the superset-sum form of the inclusion-exclusion
    formula, ``-(-1)**|N| * sum_{S >= N} (-1)**|S| l(join S)`` with ``N`` the
    negative set, evaluated on integer work values.
    """
    m = length.monoid
    k = len(order)
    if k > MAX_ATOMS:
        raise TooManyAtoms(f"{k} distinct atoms; at most {MAX_ATOMS} are supported")
    (L,), scale = to_work(length.values)
    jidx = np.zeros(2**k, dtype=np.intp)
    jidx[0] = m.neutral_index
    for i, a in enumerate(order):
        jidx[2**i:2**(i + 1)] = m.table[jidx[:2**i], m.idx(a)]
    pop = np.array([bin(s).count("1") for s in range(2**k)])
    sign = np.where(pop % 2 == 0, 1, -1)
    H = (sign * L[jidx]).astype(L.dtype)
    for i in range(k):
        H = H.reshape(-1, 2, 2**i)
        H[:, 0, :] += H[:, 1, :]
        H = H.reshape(-1)
    full = 2**k - 1
    neg_sign = sign[full ^ np.arange(2**k)]
    vals = -neg_sign * H[full ^ np.arange(2**k)]
    if scale is None:
        return vals.astype(float)
    out = np.empty(2**k, dtype=object)
    out[:] = [Fraction(int(v), scale) for v in vals]
    return out


def zeta(length: LengthFn, expr):
    """Signed measure of ``expr`` (a tree or a string in the grammar above)."""
    expr = _coerce(expr, length.monoid)
    order = atoms(expr)
    tt = truth_table(expr, order)
    if not order:
        return Fraction(0) if length.is_exact else 0.0
    vals = minterm_values(length, order)
    total = sum(vals[tt], Fraction(0) if length.is_exact else 0.0)
    return total


def zeta_by_terms(length: LengthFn, expr):
    """Same value through :func:`shannon_dnf` and :func:`product_zeta`.

    A different normal form evaluated with the literal subset sum; agreement
    with :func:`zeta` exercises independence from the chosen normalization.
    """
    expr = _coerce(expr, length.monoid)
    dnf = shannon_dnf(expr)
    return sum((product_zeta(length, pos, neg) for pos, neg in dnf.terms),
               Fraction(0) if length.is_exact else 0.0)


# -- identities ---------------------------------------------------------------

@dataclass(frozen=True)
class SignedMeasureReport:
    holds: bool
    checked: int
    failures: tuple

    def __bool__(self):
        return self.holds


def random_expr(order, rng, depth: int = 2):
    """Seeded random expression over the labels in ``order``."""
    if depth == 0 or rng.random() < 0.3:
        return Atom(order[int(rng.integers(len(order)))])
    op = int(rng.integers(4))
    a, b = random_expr(order, rng, depth - 1), random_expr(order, rng, depth - 1)
    if op == 0:
        return Union((a, b))
    if op == 1:
        return Intersection((a, b))
    if op == 2:
        return Difference(a, b)
    return Complement(a)


def check_signed_measure(length: LengthFn, sample_atoms=None, n_random: int = 20,
                         seed: int = 0, tol=1e-9) -> SignedMeasureReport:
    """Check the signed-measure identities on atom pairs and random expressions.

    Identities: ``z(x&y) = z(x) + z(y) - z(x|y)``, ``z(~x) = -z(x)``,
    ``z(x\\y) = z(x|y) - z(y)``, ``z(x|x) = z(x)``, invariance under
    ``E -> E & (w | ~w)`` and the split ``z(E) = z(E&w) + z(E&~w)``,
    agreement of the two normalizations, and for monotone lengths
    nonnegativity of ``z`` on intersections, unions and differences of atoms.
    """
    m = length.monoid
    order = tuple(m.elements if sample_atoms is None else sample_atoms)
    for a in order:
        m.idx(a)
    exact = length.is_exact
    failures = []
    checked = 0

    def same(a, b):
        return a == b if exact else abs(a - b) <= tol

    def claim(ok, what):
        nonlocal checked
        checked += 1
        if not ok:
            failures.append(what)

    rng = np.random.default_rng(seed)
    exprs = [Atom(a) for a in order]
    exprs += [random_expr(order, rng, 2) for _ in range(n_random)]
    z = {}

    def Z(e):
        if e not in z:
            z[e] = zeta(length, e)
        return z[e]

    for x in exprs:
        claim(same(Z(Complement(x)), -Z(x)), f"complement {x}")
        claim(same(Z(Union((x, x))), Z(x)), f"idempotent {x}")
        claim(same(Z(x), zeta_by_terms(length, x)), f"normal forms {x}")
        w = order[int(rng.integers(len(order)))]
        W = Atom(w)
        claim(same(Z(Intersection((x, Union((W, Complement(W)))))), Z(x)), f"redundant {w} in {x}")
        claim(same(Z(x), Z(Intersection((x, W))) + Z(Intersection((x, Complement(W))))),
              f"split {x} on {w}")
    pairs = [(x, y) for x in exprs for y in exprs]
    if len(pairs) > 400:
        pick = rng.choice(len(pairs), 400, replace=False)
        pairs = [pairs[i] for i in sorted(pick)]
    for x, y in pairs:
        claim(same(Z(Intersection((x, y))), Z(x) + Z(y) - Z(Union((x, y)))), f"intersection {x}, {y}")
        claim(same(Z(Difference(x, y)), Z(Union((x, y))) - Z(y)), f"difference {x}, {y}")
    if length.mode == "monotone":
        for a in order:
            for b in order:
                A, B = Atom(a), Atom(b)
                for e in (Intersection((A, B)), Union((A, B)), Difference(A, B)):
                    claim(Z(e) >= (0 if exact else -tol), f"positivity {e}")
    return SignedMeasureReport(not failures, checked, tuple(failures))
