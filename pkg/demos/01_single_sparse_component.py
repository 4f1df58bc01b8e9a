"""Extract one sparse component and watch the support shrink with gamma.

A sparse rank-one spike is planted in Gaussian noise.  The l1-penalized
solver keeps a variable active only while its column explains enough
variance at the current iterate, so raising gamma walks the trade-off from
full PCA down to a single variable, passing through the planted support on
the way.
"""

import numpy as np

from sparsepca import PenaltyConfig, gamma_max, solve_single, variance

rng = np.random.default_rng(0)
p, n = 40, 120
A = rng.standard_normal((p, n))
support = rng.choice(n, size=8, replace=False)
z_true = np.zeros(n)
z_true[support] = rng.choice([-1.0, 1.0], size=8) / np.sqrt(8)
u = rng.standard_normal(p)
u /= np.linalg.norm(u)
A += 20.0 * np.outer(u, z_true)

gmax = gamma_max(A, "l1")
sigma1 = np.linalg.svd(A, compute_uv=False)[0]
print(f"data: {p} samples x {n} variables, gamma_max = {gmax:.3f}")
print(f"planted support: {np.sort(support)}")
print()
print(f"{'gamma/gmax':>10} {'card':>5} {'variance':>10} {'var/PCA':>8}  planted found")

for frac in (0.0, 0.15, 0.3, 0.4, 0.5, 0.7):
    res = solve_single(A, PenaltyConfig("l1", frac * gmax))
    found = set(np.flatnonzero(res.z_star))
    var = variance(A, res.z_star)
    hits = len(found & set(support))
    tag = "  <- exact support" if found == set(support) else ""
    print(
        f"{frac:>10.2f} {len(found):>5d} {var:>10.2f} {var / sigma1**2:>8.3f}"
        f"  {hits}/8{tag}"
    )

print()
print("between the noise norms and the spike norms, gamma isolates the plant")
