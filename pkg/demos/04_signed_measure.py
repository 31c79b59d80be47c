"""Extending a length function to Boolean combinations of elements."""

from fractions import Fraction

import numpy as np

from infometric import check_signed_measure, fix_p2, zeta, zeta_by_terms
from infometric.boolean import random_expr
from infometric.numeric import render
from infometric.setmodel import UnsupportedComplement, build_set_instance, oracle_zeta

# On subsets of {1, 2} with cardinality, zeta is the size of the set the expression names
m, length = fix_p2()
for text in ("{1} & {2}", "{1,2} \\ {1}", "{1} | {2}", "~{1} & {1,2}"):
    print(f"zeta({text}) = {render(zeta(length, text))}")

# Two evaluation routes agree: minterm sums and a disjoint normal form
e = "({1} | {2}) \\ ({1} & {2})"
print("\nroutes agree:", zeta(length, e) == zeta_by_terms(length, e))

# A weighted set model gives an independent answer from the actual sets
inst = build_set_instance([[1, 2], [2, 3], [4]], {1: Fraction(1, 2), 2: 3, 3: 1, 4: 2})
rng = np.random.default_rng(7)
print("\nweighted sets:", inst.monoid.elements)
shown = 0
while shown < 5:
    expr = random_expr(inst.monoid.elements[1:4], rng, 2)
    try:
        expected = oracle_zeta(inst, expr)
    except UnsupportedComplement:
        # a bare complement names no finite set, so there is nothing to compare
        continue
    shown += 1
    print(f"  {str(expr):40} zeta {render(zeta(inst.length, expr)):>6}  sets {render(expected):>6}")

# The identity suite: modularity, additivity on disjoint pieces, positivity
rep = check_signed_measure(length, n_random=20, seed=0)
print("\nsigned measure identities hold:", rep.holds, f"({rep.checked} checks)")
