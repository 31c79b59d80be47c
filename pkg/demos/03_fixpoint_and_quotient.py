"""Forcing the inequalities by iterated closure, then collapsing zero distances."""

from infometric import d_table, distance_table, fix_bad, ideal_length, is_fixed_point, quotient, tiha
from infometric.numeric import render

m, length = fix_bad()

# One round: close d under chains (triangle) and under joins, read off a new length
closed = tiha(m, distance_table(length))
print("one closure round, new length:",
      {e: render(v) for e, v in zip(m.elements, closed.lengths())})

# Iterate until nothing changes; exact arithmetic makes the limit exact
res = ideal_length(length, "d")
print("\niterations:", res.trace.iterations, " converged:", res.trace.converged)
print("limit length:", {e: render(v) for e, v in res.length.as_dict().items()})
print("limit is a fixed point:", is_fixed_point(res.length).holds)
print("ratios min/mean:", render(res.ratio_min), render(res.ratio_mean))

# The limit metric is only a pseudometric: {x} and {y,z} are now at distance 0
q = quotient(m, res.table)
print("\nclasses:")
for c in q.classes:
    print("  ", ", ".join(c))
print("quotient elements:", q.quotient.elements)
print("induced length:", {e: render(v) for e, v in q.induced_length.as_dict().items()})
print("quotient metric:", [[render(v) for v in row] for row in d_table(q.induced_length)])
