"""Cardinality as a function of gamma, against the theoretical upper bound.

A variable with ||a_i|| <= gamma (l1 penalty) can never carry a nonzero
loading, so counting the columns above the threshold bounds the cardinality
before any solve.  On the normalized axis gamma/gamma_max the same bound
covers the l0 penalty at sqrt(gamma)/gamma_max^(1/2)... the two observed
curves collapse onto one bound.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sparsepca import (
    PenaltyConfig,
    cardinality_upper_bound,
    gamma_max,
    gen_gaussian,
    solve_single,
)

P, N, REPS, K = 100, 300, 10, 30

fracs = 1.0 - np.geomspace(1.0, 1e-6, K)
observed = {"l1": np.zeros(K), "l0": np.zeros(K)}
bound = np.zeros(K)

for rep in range(REPS):
    a = gen_gaussian(P, N, 7 + rep)
    gmax_l1 = gamma_max(a, "l1")
    for i, f in enumerate(fracs):
        pen1 = PenaltyConfig("l1", f * gmax_l1)
        bound[i] += cardinality_upper_bound(a, pen1) / REPS
        observed["l1"][i] += np.count_nonzero(solve_single(a, pen1).z_star) / REPS
        # matched l0 sweep: sqrt(gamma_l0) = f * gmax_l1
        pen0 = PenaltyConfig("l0", (f * gmax_l1) ** 2)
        observed["l0"][i] += np.count_nonzero(solve_single(a, pen0).z_star) / REPS

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(fracs, bound, "k--", label="theoretical upper bound")
ax.plot(fracs, observed["l1"], "o-", ms=3, lw=0.8, label="observed, l1")
ax.plot(fracs, observed["l0"], "s-", ms=3, lw=0.8, label="observed, l0")
ax.set_xlabel("gamma / gamma_max (l1 axis; sqrt for l0)")
ax.set_ylabel("cardinality")
ax.legend()
fig.tight_layout()
fig.savefig("cardinality_vs_gamma.png", dpi=120)
print("wrote cardinality_vs_gamma.png")

assert np.all(observed["l1"] <= bound + 1e-9)
print(f"observed l1 curve lies under the bound at all {K} grid points")
print(f"cardinality at the top of the grid: {observed['l1'][-1]:.1f} (bound {bound[-1]:.1f})")
