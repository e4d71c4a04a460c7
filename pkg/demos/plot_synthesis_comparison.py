"""
Comparing the three synthesis methods
=====================================

Synthesize a few functions with DIMS, factorized DIMS and safe
decomposition, then compare cost and orphan behaviour.
"""

from qdisynth import (
    BooleanFunction,
    dual_rail_cover,
    estimate_cost,
    fdims_factorize,
    from_truth_table,
    orphan_summary,
    safe_decompose,
    synthesize,
)

and3 = from_truth_table(3, [0, 0, 0, 0, 0, 0, 0, 1])
f1, f0 = dual_rail_cover(and3)

# The false rail of AND3 has seven minterms.
print("f0 minterms:", " + ".join(map(str, f0.terms)))

# Factorization shares the (X30 + X31) sum between two products.
print("factored   :", fdims_factorize(f0))

# Safe decomposition only merges terms that differ in a single variable.
print("safe       :", safe_decompose(f0).expr())
print()

# Counting top-level terms makes the factored form look cheap; the flag
# warns that products of sums hide extra gates.
for label, artifact in [
    ("dims", (f1, f0)),
    ("fdims", (fdims_factorize(f1), fdims_factorize(f0))),
    ("safe", synthesize(and3, "safe")),
]:
    print(f"[{label}]")
    print(estimate_cost(artifact).render())
    print()

# A small survey over every 3-input function: how many netlists orphan?
counts = {m: 0 for m in ("dims", "fdims", "safe")}
for table in range(1, 255):
    f = BooleanFunction.from_int(3, table)
    for method in counts:
        counts[method] += not orphan_summary(synthesize(f, method)).clean
print("netlists with orphans among 254 functions:", counts)
