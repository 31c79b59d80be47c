"""A monotone length function whose d breaks the triangle inequality."""

from infometric import check_inequalities, d_of, fix_bad
from infometric.numeric import render

m, length = fix_bad()
print("length:", {e: render(v) for e, v in length.as_dict().items()})

# {x} and {y} are at distance 0, so are {y} and {z}, yet {x} and {z} are not
for a, b in (("{x}", "{y}"), ("{y}", "{z}"), ("{x}", "{z}")):
    print(f"d({a}, {b}) = {render(d_of(length, a, b))}")

r = check_inequalities(length)
print("\ntriangle inequality for d:", r.d.delta.holds, "witness", r.d.delta.witness)
print("join inequality for d:     ", r.d.nabla.holds, "witness", r.d.nabla.witness)

# The six equivalent conditions fail together, as they must
print("\nequivalent conditions:")
for key, flag in r.equivalent_flags().items():
    print(f"  ({key}) {flag.holds}  witness {flag.witness}")
