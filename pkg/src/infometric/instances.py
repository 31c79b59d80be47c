"""Named fixtures and seeded random instances."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .lengths import LengthFn, counting_length, validate_length
from .monoid import Monoid, free_semilattice, random_submonoid


def fix_p2():
    """Powerset of ``{1, 2}`` with the counting measure."""
    m = free_semilattice(2)
    return m, counting_length(m)


def fix_bad():
    """Free semilattice on ``x, y, z`` with a monotone length whose ``d`` breaks
    the triangle inequality: ``d({x},{y}) = d({y},{z}) = 0`` but ``d({x},{z}) = 2``."""
    m = free_semilattice(3, ["x", "y", "z"])
    values = {"{}": 0, "{x}": 2, "{y}": 2, "{z}": 2, "{x,y}": 2, "{y,z}": 2,
              "{x,z}": 4, "{x,y,z}": 4}
    return m, validate_length(m, values)


BUILTINS = {"fix_p2": fix_p2, "fix_bad": fix_bad}


def random_monoid(rng, max_generators: int = 3, max_elements: int = 8) -> Monoid:
    """Random join-closed family, biased towards the larger sizes allowed."""
    g = max_generators if rng.random() < 0.7 else int(rng.integers(1, max_generators + 1))
    cap = min(2**g, max_elements)
    keep = int(rng.integers(max(1, cap // 2), cap + 1))
    return random_submonoid(g, keep, int(rng.integers(2**31)))


def _linear_extension(m: Monoid):
    below = m.leq_matrix.sum(axis=0)
    return sorted(range(len(m)), key=lambda i: (below[i], i))


def feature_length(m: Monoid, rng, n_features: int = 4, max_weight: int = 3) -> np.ndarray:
    """``l(x) = sum_k w_k [x not <= c_k]``: a measure of the set of cuts ``x`` escapes."""
    leq = m.leq_matrix
    values = np.zeros(len(m), dtype=np.int64)
    for _ in range(n_features):
        c = int(rng.integers(len(m)))
        w = int(rng.integers(1, max_weight + 1))
        values += w * (~leq[:, c])
    return values


def greedy_length(m: Monoid, rng, max_step: int = 3):
    """Values drawn in a linear extension between the largest value below and the
    cheapest two-part decomposition, mostly at one of the two ends; ``None`` when the draw paints itself into a corner."""
    J = m.table
    leq = m.leq_matrix
    values = [None] * len(m)
    for x in _linear_extension(m):
        if x == m.neutral_index:
            values[x] = 0
            continue
        lower = max((values[a] for a in range(len(m)) if leq[a, x] and a != x), default=0)
        uppers = [values[a] + values[b] for a in range(len(m)) for b in range(len(m))
                  if J[a, b] == x and a != x and b != x]
        if not uppers:
            values[x] = lower + int(rng.integers(1, max_step + 1))
            continue
        upper = min(uppers)
        if lower > upper:
            return None
        # extremes of the window are where the inequalities tend to break
        u = rng.random()
        values[x] = lower if u < 0.4 else upper if u < 0.8 else int(rng.integers(lower, upper + 1))
    return np.array(values, dtype=np.int64)


STRATEGIES = ("features", "capped", "max", "greedy")


def random_monotone_length(m: Monoid, seed, strategy: str | None = None) -> LengthFn:
    """Seeded integer-valued monotone length function.

    ``features`` always gives a set-model length; ``capped`` (minimum with a
    constant), ``max`` (pointwise maximum of two) and ``greedy`` (random
    values inside the admissible window) typically do not.
    """
    rng = np.random.default_rng(seed)
    if strategy is None:
        strategy = STRATEGIES[int(rng.choice(len(STRATEGIES), p=[0.2, 0.15, 0.15, 0.5]))]
    if strategy == "features":
        values = feature_length(m, rng)
    elif strategy == "capped":
        f = feature_length(m, rng)
        values = np.minimum(f, int(rng.integers(1, max(2, f.max()) + 1)))
    elif strategy == "max":
        values = np.maximum(feature_length(m, rng), feature_length(m, rng))
    elif strategy == "greedy":
        values = None
        for _ in range(20):
            values = greedy_length(m, rng)
            if values is not None:
                break
        if values is None:
            values = feature_length(m, rng)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return validate_length(m, [Fraction(int(v)) for v in values])


def random_nonmonotone_length(m: Monoid, seed) -> LengthFn:
    """Values in ``[a, 2a]`` off the neutral element; any such choice is subadditive."""
    rng = np.random.default_rng(seed)
    a = int(rng.integers(1, 4))
    values = [0 if i == m.neutral_index else int(rng.integers(a, 2 * a + 1)) for i in range(len(m))]
    return validate_length(m, values, "nonmonotone")


def random_instance(seed, max_elements: int = 8, strategy=None):
    rng = np.random.default_rng(seed)
    m = random_monoid(rng, 3, max_elements)
    return m, random_monotone_length(m, int(rng.integers(2**31)), strategy)


def corpus(count: int, seed: int = 0, max_elements: int = 8):
    """``count`` seeded monotone instances mixing every strategy."""
    return [random_instance((seed, k), max_elements) for k in range(count)]
