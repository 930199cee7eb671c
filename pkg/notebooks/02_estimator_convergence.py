"""
Color-coding estimates versus exact counts
==========================================

On a random complex the estimator is compared with exact counts, first
across independent colorings and then for growing sample sizes under a
single coloring.
"""

import numpy as np

from simplets import build, count_exact, estimate_with_table, get_catalog, normalized_error, primal_graph, sc3
from simplets.synthetic import random_complex

K = random_complex(60, 120, max_size=4, rng_seed=1, min_size=2)
cat = get_catalog(4)
exact = count_exact(K, cat)
print("connected 4-node sets:", exact.total)

# Independent runs, each with its own coloring.  The error levels off:
# past a few thousand samples the spread left by the coloring dominates.
for x in (1_000, 10_000, 50_000):
    errs = [normalized_error(exact, sc3(K, cat, x, rng_seed=s)) for s in range(5)]
    print(f"x={x:>6}: mean normalized error {np.mean(errs):.4f}")

# One fixed coloring: the spread shrinks like 1/sqrt(x).
G = primal_graph(K)
table = build(G, 4, rng_seed=0)
common = int(np.argmax(exact.counts))
for x in (100, 1_000, 10_000):
    est = [estimate_with_table(K, G, table, cat, x, rng_seed=[x, r]).counts[common] for r in range(10)]
    print(f"x={x:>6}: std {np.std(est, ddof=1):9.2f}  x*var {x * np.var(est, ddof=1):12.0f}")
