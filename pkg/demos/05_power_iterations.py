"""The generic maximization scheme on three classical problems.

The same linearize-and-step loop gives (i) the power method on the sphere,
(ii) its shifted variant for indefinite matrices, and (iii) an orthogonal
Procrustes solver on the Stiefel manifold.  Along the way it satisfies two
guarantees: a nondecreasing objective and an O(1/k) bound on the smallest
optimality gap seen so far.
"""

import numpy as np

from sparsepca import StopRule, power_method, procrustes, shifted_power_method

rng = np.random.default_rng(3)
stop = StopRule(relative_tolerance=1e-12)

# power method
b = rng.standard_normal((8, 8))
c = b @ b.T
x0 = rng.standard_normal(8)
x0 /= np.linalg.norm(x0)
trace = power_method(c, x0, stop=stop, record_deltas=True)
lam = np.linalg.eigvalsh(c).max()
print(f"power method: 2*f = {2 * trace.objectives[-1]:.10f}, "
      f"lambda_max = {lam:.10f}, {trace.iterations} iterations")

# the O(1/k) certificate, printed every few iterations
f0 = trace.objectives[0]
run_min = np.minimum.accumulate(trace.deltas)
print("  k   min gap so far   (f*-f0)/(k+1)")
for k in range(0, len(run_min), max(1, len(run_min) // 5)):
    print(f"  {k:3d}   {run_min[k]:13.3e}   {(0.5 * lam - f0) / (k + 1):13.3e}")

# shifted power method on an indefinite matrix
d = rng.standard_normal((6, 6))
c_ind = 0.5 * (d + d.T)
omega = np.linalg.norm(c_ind, "fro") + 1.0
_, lam_est = shifted_power_method(c_ind, omega, np.eye(6)[:, 0], stop=stop)
print(f"shifted power: estimate {lam_est:.10f}, "
      f"oracle {np.linalg.eigvalsh(c_ind).max():.10f}")

# rectangular Procrustes: fit an orthonormal frame to noisy rotated data
x_true = np.linalg.qr(rng.standard_normal((7, 3)))[0]
dmap = rng.standard_normal((7, 7))
target = dmap @ x_true + 0.05 * rng.standard_normal((7, 3))
omega = np.linalg.eigvalsh(dmap.T @ dmap).max() + 1.0
trace, residual = procrustes(target, dmap, omega, np.eye(7)[:, :3], stop=stop)
print(f"procrustes: squared misfit {residual:.4f}, "
      f"frame error {np.linalg.norm(trace.x - x_true):.3f}")
