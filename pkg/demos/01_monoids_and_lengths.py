"""Join-semilattices, length functions and the two distances they induce."""

from infometric import check_inequalities, d_table, free_semilattice, sigma_table, validate_length
from infometric.numeric import render

# The free semilattice on two generators: subsets of {1, 2} under union
m = free_semilattice(2)
print("elements:", m.elements)
print("neutral:", m.neutral, " top:", m.top)
print("{1} v {2} =", m.join("{1}", "{2}"))

# A length function: zero at the neutral element, monotone and subadditive.
# Cardinality is the obvious choice; here {1} is made twice as heavy.
length = validate_length(m, {"{}": 0, "{1}": 2, "{2}": 1, "{1,2}": 3})
print("length:", {e: render(v) for e, v in length.as_dict().items()})

# d(x, y) = l(x v y) - min(l(x), l(y)),  sigma(x, y) = 2 l(x v y) - l(x) - l(y)
for name, table in (("d", d_table(length)), ("sigma", sigma_table(length))):
    print(f"\n{name}:")
    for e, row in zip(m.elements, table):
        print(f"  {e:>6}", " ".join(f"{render(v):>3}" for v in row))

# A measure of sets gives metrics satisfying every inequality
report = check_inequalities(length)
print("\nall inequalities hold:", report.all_hold())
for key, flag in report.equivalent_flags().items():
    print(f"  ({key}) {flag.holds}")

# Invalid input is rejected with a witness
try:
    validate_length(m, {"{}": 0, "{1}": 1, "{2}": 1, "{1,2}": 3})
except ValueError as exc:
    print("\nrejected:", exc)
