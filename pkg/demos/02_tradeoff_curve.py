"""Variance/cardinality trade-off curves, averaged over random instances.

Sweeps gamma from 0 to the suppression threshold on Gaussian test matrices
and plots the explained-variance ratio against the loading cardinality.
Both penalties end at ratio 1 (full PCA) on one side and at the strongest
single column on the other.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from sparsepca import ExperimentSpec, emit_results, run_experiment, tradeoff_sweep

P, N, REPS = 50, 150, 10

fig, ax = plt.subplots(figsize=(6, 4))
for kind, marker in (("l1", "o"), ("l0", "s")):
    spec = ExperimentSpec(mode="tradeoff", gens=[(P, N, 42)], penalty=kind, reps=REPS)
    result = tradeoff_sweep(spec)
    cards = [pt.cardinality for pt in result.averages]
    ratios = [pt.variance_ratio for pt in result.averages]
    ax.plot(cards, ratios, marker, ms=3, ls="-", lw=0.8, label=f"{kind} penalty")
    print(f"{kind}: ratio {ratios[0]:.4f} at cardinality {cards[0]:.0f} "
          f"down to {ratios[-1]:.4f} at cardinality {cards[-1]:.0f}")

ax.set_xlabel("cardinality of the loading vector")
ax.set_ylabel("Var(sparse) / Var(PCA)")
ax.set_title(f"trade-off on {REPS} Gaussian matrices ({P} x {N})")
ax.legend()
fig.tight_layout()
fig.savefig("tradeoff_curve.png", dpi=120)
print("wrote tradeoff_curve.png")

# the same sweep through the emission path, for downstream tooling
payload = run_experiment(
    ExperimentSpec(mode="tradeoff", gens=[(P, N, 42)], penalty="l1", reps=2)
)
emit_results(payload, "csv", "tradeoff_points.csv")
print("wrote tradeoff_points.csv")
