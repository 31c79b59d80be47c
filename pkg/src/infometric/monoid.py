"""Finite abelian idempotent monoids (join-semilattices with a least element)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

MAX_ELEMENTS = 4096
MAX_GENERATORS = 16


class UnknownElement(KeyError):
    """A label that is not an element of the monoid at hand."""


class MonoidTooLarge(ValueError):
    pass


class TooManyGenerators(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed axiom together with the elements that witness it."""

    kind: str
    witness: tuple

    def __str__(self):
        return f"{self.kind}({', '.join(map(str, self.witness))})"


class MonoidError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid monoid")


class Monoid:
    """A finite abelian idempotent monoid ``(S, join, neutral)``.

    Elements are opaque string labels; internally every label has a dense
    index and the join is an ``n x n`` index table.  Instances are immutable
    and should be obtained from :func:`validate_monoid` or one of the
    builders, which guarantee the axioms.
    """

    __slots__ = ("elements", "neutral", "table", "index", "_leq", "_top")

    def __init__(self, elements, neutral, table):
        self.elements = tuple(elements)
        self.neutral = neutral
        self.table = np.asarray(table, dtype=np.intp)
        self.table.setflags(write=False)
        self.index = {label: i for i, label in enumerate(self.elements)}
        self._leq = None
        self._top = None

    def __repr__(self):
        return f"Monoid(n={len(self)}, neutral={self.neutral!r})"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self.index

    def __eq__(self, other):
        if not isinstance(other, Monoid):
            return NotImplemented
        return (self.elements == other.elements and self.neutral == other.neutral
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.elements, self.neutral, self.table.tobytes()))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def neutral_index(self) -> int:
        return self.index[self.neutral]

    def idx(self, label) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownElement(label) from None

    def join(self, x, y):
        return self.elements[self.table[self.idx(x), self.idx(y)]]

    def join_all(self, labels):
        acc = self.neutral_index
        for label in labels:
            acc = self.table[acc, self.idx(label)]
        return self.elements[acc]

    @property
    def leq_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j] = (x_i <= x_j)``, i.e. ``join(x_i, x_j) == x_j``."""
        if self._leq is None:
            n = len(self)
            leq = self.table == np.arange(n)[None, :]
            leq.setflags(write=False)
            self._leq = leq
        return self._leq

    def leq(self, x, y) -> bool:
        return bool(self.leq_matrix[self.idx(x), self.idx(y)])

    @property
    def top_index(self) -> int:
        if self._top is None:
            acc = self.neutral_index
            for i in range(len(self)):
                acc = self.table[acc, i]
            self._top = int(acc)
        return self._top

    @property
    def top(self):
        return self.elements[self.top_index]

    def relabel(self, mapping) -> Monoid:
        """Same structure under new labels (``mapping`` old -> new)."""
        new = [mapping[e] for e in self.elements]
        if len(set(new)) != len(new):
            raise ValueError("relabelling is not injective")
        return Monoid(new, mapping[self.neutral], self.table)

    def to_dict(self) -> dict:
        return {
            "elements": list(self.elements),
            "neutral": self.neutral,
            "join": [[self.elements[k] for k in row] for row in self.table],
        }


def leq(m: Monoid, x, y) -> bool:
    """``x <= y`` in the order induced by the join: ``join(x, y) == y``."""
    return m.leq(x, y)


def _index_table(elements, join):
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.full((n, n), -1, dtype=np.intp)
    if callable(join):
        cells = ((x, y, join(x, y)) for x in elements for y in elements)
    elif isinstance(join, dict):
        cells = ((x, y, z) for (x, y), z in join.items())
    else:
        rows = list(join)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MonoidError([Violation("IncompleteTable", (f"expected {n}x{n} table",))])
        cells = ((elements[i], elements[j], rows[i][j]) for i in range(n) for j in range(n))
    for x, y, z in cells:
        for label in (x, y, z):
            if label not in index:
                raise UnknownElement(label)
        table[index[x], index[y]] = index[z]
    missing = np.argwhere(table < 0)
    if len(missing):
        i, j = missing[0]
        raise MonoidError([Violation("IncompleteTable", (elements[i], elements[j]))])
    return table


def monoid_violations(elements, neutral, table, max_witnesses: int = 20):
    """All axiom violations of an index table, at most ``max_witnesses`` per axiom."""
    n = len(elements)
    J = np.asarray(table)
    e = {x: i for i, x in enumerate(elements)}[neutral]
    found = []

    def add(kind, idx_tuples):
        for t in idx_tuples[:max_witnesses]:
            found.append(Violation(kind, tuple(elements[int(k)] for k in t)))

    bad = np.argwhere(J != J.T)
    add("NotCommutative", [tuple(p) for p in bad if p[0] < p[1]])
    bad = np.flatnonzero(J[np.arange(n), np.arange(n)] != np.arange(n))
    add("NotIdempotent", [(i,) for i in bad])
    bad = np.flatnonzero((J[:, e] != np.arange(n)) | (J[e, :] != np.arange(n)))
    add("BadNeutral", [(i,) for i in bad])
    assoc = []
    chunk = max(1, 2**22 // max(n * n, 1))
    for start in range(0, n, chunk):
        xs = np.arange(start, min(n, start + chunk))
        left = J[J[xs][:, :, None], np.arange(n)[None, None, :]]   # (x∇y)∇z
        right = J[xs[:, None, None], J[None, :, :]]                # x∇(y∇z)
        hits = np.argwhere(left != right)
        assoc.extend((xs[h[0]], h[1], h[2]) for h in hits[: max_witnesses - len(assoc)])
        if len(assoc) >= max_witnesses:
            break
    add("NotAssociative", assoc)
    return found


def validate_monoid(elements, neutral, join, max_elements: int = MAX_ELEMENTS) -> Monoid:
    """Build a :class:`Monoid` from raw data, checking every axiom.

    ``join`` may be an ``n x n`` nested sequence of labels (row ``i`` for
    ``elements[i]``), a dict ``{(x, y): z}`` covering all pairs, or a callable.
    Raises :class:`MonoidError` listing every violated axiom with witnesses.
    """
    elements = tuple(elements)
    if not elements:
        raise MonoidError([Violation("Empty", ())])
    if len(set(elements)) != len(elements):
        raise MonoidError([Violation("DuplicateElement", ())])
    if len(elements) > max_elements:
        raise MonoidTooLarge(f"{len(elements)} elements exceeds the cap of {max_elements}")
    if neutral not in elements:
        raise UnknownElement(neutral)
    table = _index_table(elements, join)
    violations = monoid_violations(elements, neutral, table)
    if violations:
        raise MonoidError(violations)
    return Monoid(elements, neutral, table)


def set_label(members, names=None) -> str:
    """Canonical label of a finite set, e.g. ``{1,2}``; the empty set is ``{}``."""
    items = sorted(members) if names is None else [names[k] for k in sorted(members)]
    return "{" + ",".join(str(v) for v in items) + "}"


def from_masks(masks, names) -> Monoid:
    """Monoid of union-closed bit masks (must contain 0), labelled by member names."""
    masks = sorted(set(int(m) for m in masks), key=lambda m: (bin(m).count("1"), m))
    if masks[0] != 0:
        raise ValueError("family must contain the empty set")
    pos = {m: i for i, m in enumerate(masks)}
    try:
        table = np.array([[pos[a | b] for b in masks] for a in masks], dtype=np.intp)
    except KeyError:
        raise ValueError("family is not closed under union") from None
    labels = [set_label([k for k in range(len(names)) if m >> k & 1], names) for m in masks]
    return Monoid(labels, labels[0], table)


def union_closure(masks) -> set:
    family = {0}
    for m in masks:
        family |= {m | f for f in family}
    return family


def free_semilattice(n: int, names=None, max_elements: int = MAX_ELEMENTS) -> Monoid:
    """Powerset of ``n`` generators under union; neutral element is ``{}``."""
    if n < 1 or n > MAX_GENERATORS:
        raise TooManyGenerators(f"need 1 <= n <= {MAX_GENERATORS}, got {n}")
    if 2**n > max_elements:
        raise MonoidTooLarge(f"2^{n} elements exceeds the cap of {max_elements}")
    names = [str(k + 1) for k in range(n)] if names is None else list(names)
    return from_masks(range(2**n), names)


def random_submonoid(n_generators: int, n_keep: int, seed: int, names=None) -> Monoid:
    """Seeded join-closed subfamily of the free semilattice with at least ``n_keep`` elements.

    Random subsets are added one at a time and the family is re-closed under
    union, so closure holds by construction.  ``n_keep`` is clamped to
    ``2**n_generators``.
    """
    if n_keep < 1:
        raise ValueError("n_keep must be >= 1")
    if n_generators < 1 or n_generators > MAX_GENERATORS:
        raise TooManyGenerators(f"need 1 <= n_generators <= {MAX_GENERATORS}")
    rng = np.random.default_rng(seed)
    target = min(n_keep, 2**n_generators)
    family = {0}
    while len(family) < target:
        mask = int(rng.integers(1, 2**n_generators))
        if mask not in family:
            family = union_closure(list(family) + [mask])
    names = [str(k + 1) for k in range(n_generators)] if names is None else list(names)
    return from_masks(family, names)


def is_join_closed(masks) -> bool:
    s = set(masks)
    return 0 in s and all(a | b in s for a, b in combinations(s, 2))
