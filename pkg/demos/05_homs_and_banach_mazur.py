"""Hom sets between semilattices, their lengths and the Banach-Mazur distance."""

from pathlib import Path

from infometric import banach_mazur, hom_ideal_length, load_category, product_flags
from infometric.homs import ell_prime_values
from infometric.numeric import render

cat = load_category(Path(__file__).parent / "data" / "three_objects.json")
for (a, b), homs in sorted(cat.homsets.items()):
    print(f"{a}->{b}: {len(homs)} homs")

# Operator length l'(U) = max d(Ua, Ub) / d(a, b); submultiplicative under composition
ops = {key: ell_prime_values(cat, *key) for key in cat.homsets}
print("\nA->C operator lengths:", [render(v) for v in ops[("A", "C")]])

# Pointwise lengths are not submultiplicative in general; the hom-set fixpoint forces it
print("product inequalities for pointwise lengths:", product_flags(cat))
res = hom_ideal_length(cat)
print("after the fixpoint:", product_flags(cat, res.lengths), f"({res.iterations} iterations)")

# Log of the cheapest isomorphism round trip; +inf when there is no isomorphism.
# Forced lengths can reach 0 on a round trip, which gives -inf.
print()
for lengths, name in ((ops, "operator"), (None, "pointwise"), (res.lengths, "fixpoint")):
    row = {f"{a}-{b}": banach_mazur(cat, a, b, lengths).value for a, b in (("A", "B"), ("A", "C"))}
    print(f"{name:>9}:", row)
