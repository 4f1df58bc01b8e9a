"""Filling loading vectors on a fixed sparsity pattern, deflation, and
variance metrics.

Given a pattern of active entries, the remaining freedom in the loading
matrix Z is used to maximize the explained variance trace(X.T A Z N) over
X with orthonormal columns and Z with unit-norm columns vanishing off the
pattern.  The single-component case has an exact solution through the
dominant singular pair of the active columns; the block case is solved by
alternating over X and Z.
"""

from dataclasses import dataclass

import numpy as np

from .gradient import IterateTrace, StopRule, Stiefel, in_domain
from .linalg import adjusted_variance, polar_factor
from .single import SingleResult, init_column, rank_one_fill, solve_single


@dataclass
class FillProblem:
    """Variance-maximization problem on a fixed pattern.

    ``pattern`` is n-by-m with 0 marking an active entry and 1 a suppressed
    one; ``mu`` holds the m positive component weights; ``x0`` is the
    starting point on the Stiefel manifold.
    """

    a: np.ndarray
    pattern: np.ndarray
    mu: np.ndarray
    x0: np.ndarray


@dataclass
class AlternatingFill:
    """Outcome of :func:`alternating_fill`."""

    x: np.ndarray
    z: np.ndarray
    objectives: np.ndarray
    sweeps: int
    termination: str
    zero_columns: np.ndarray


def fill_single_l1(a, pattern):
    """Exact single-component fill: the loading vector restricted to the
    active set is the dominant right singular vector of the active-column
    submatrix, and x is the matching left singular vector.

    An all-suppressed pattern yields the zero loading vector (with the
    first basis vector standing in for x).
    """
    a = np.asarray(a, dtype=float)
    pattern = np.asarray(pattern)
    active = pattern == 0
    if not np.any(active):
        x = np.zeros(a.shape[0])
        x[0] = 1.0
        return x, np.zeros(a.shape[1])
    return rank_one_fill(a, active)


def alternating_fill(prob, stop=None):
    """Alternate between the closed-form updates of Z (proportional to
    A.T X N on the pattern, active parts normalized to unit length) and X
    (polar factor of A Z N) until the explained variance trace(X.T A Z N)
    stalls.

    Each half-step solves its subproblem exactly, so the objective is
    nondecreasing across sweeps.  The Z update zeroes the pattern before
    normalizing: normalizing the full column first looks equivalent but is
    not the subproblem maximizer and loses monotonicity.

    Parameters
    ----------
    prob : FillProblem
    stop : StopRule, optional
        Defaults to relative tolerance 1e-4 with a cap of 10000 sweeps.

    Returns
    -------
    AlternatingFill
        The objective values (one per sweep, measured after the X update)
        and the final pair.  Columns whose active part vanished are zero in
        ``z`` and flagged in ``zero_columns``.
    """
    if stop is None:
        stop = StopRule(relative_tolerance=1e-4, max_iterations=10000)
    a = np.asarray(prob.a, dtype=float)
    pattern = np.asarray(prob.pattern)
    if pattern.ndim == 1:
        pattern = pattern[:, None]
    mu = np.asarray(prob.mu, dtype=float)
    x = np.asarray(prob.x0, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    p, m = x.shape
    if pattern.shape != (a.shape[1], m) or mu.shape != (m,):
        raise ValueError("pattern / mu dimensions do not match x0")
    if np.any(mu <= 0):
        raise ValueError("mu must be positive")
    if not in_domain(Stiefel(p, m), x):
        raise ValueError("x0 does not have orthonormal columns")

    active = pattern == 0
    n = a.shape[1]
    if not active.any():
        return AlternatingFill(
            x=x,
            z=np.zeros((n, m)),
            objectives=np.asarray([0.0]),
            sweeps=0,
            termination="converged",
            zero_columns=np.ones(m, dtype=bool),
        )

    z = np.zeros((n, m))
    objectives = []
    f_prev = None
    termination = "max_iterations"
    sweeps = 0
    for _ in range(stop.max_iterations):
        g = (a.T @ x) * mu[None, :]
        g = np.where(active, g, 0.0)
        norms = np.linalg.norm(g, axis=0)
        z = np.divide(g, norms[None, :], out=np.zeros_like(g), where=norms > 0.0)
        azn = a @ (z * mu[None, :])
        x = polar_factor(azn).u
        f_new = float(np.vdot(x, azn))
        objectives.append(f_new)
        sweeps += 1
        if f_prev is not None:
            denom = abs(f_prev) if abs(f_prev) > 1e-15 else 1.0
            if (f_new - f_prev) / denom <= stop.relative_tolerance:
                termination = "converged"
                break
        f_prev = f_new

    zero_columns = np.linalg.norm(z, axis=0) == 0.0
    return AlternatingFill(
        x=x,
        z=z,
        objectives=np.asarray(objectives),
        sweeps=sweeps,
        termination=termination,
        zero_columns=zero_columns,
    )


def deflate(a, z):
    """Residual matrix ``a - (a z) z.T`` for a unit-norm loading vector z.
    The residual annihilates z, so subsequent extractions cannot reuse it."""
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    return a - np.outer(a @ z, z)


def variance(a, z):
    """Variance explained by the component ``a @ z``, i.e. ``||a z||^2``."""
    y = np.asarray(a, dtype=float) @ np.asarray(z, dtype=float)
    return float(y @ y)


def sequential_extract(a, penalty, m, stop=None):
    """Extract m components one at a time, deflating after each.

    Each stage solves the single-unit problem on the current residual,
    starting from that residual's largest column.  A stage whose loading
    vector is fully suppressed contributes a zero component and the
    extraction continues on the unchanged residual.

    Returns
    -------
    (list of SingleResult, float)
        Per-stage results and the adjusted variance of the extracted
        components measured against the original matrix.
    """
    a = np.asarray(a, dtype=float)
    if m < 1:
        raise ValueError("m must be >= 1")
    b = a.copy()
    results = []
    n = a.shape[1]
    for _ in range(m):
        if not np.any(b):
            results.append(_zero_result(b.shape[0], n))
            continue
        res = solve_single(b, penalty, x0=init_column(b), stop=stop)
        results.append(res)
        if not res.fully_suppressed:
            b = deflate(b, res.z_star)
    z = np.column_stack([r.z_star for r in results])
    return results, adjusted_variance(a @ z)


def _zero_result(p, n):
    x = np.zeros(p)
    x[0] = 1.0
    trace = IterateTrace(
        x=x,
        objectives=np.asarray([0.0]),
        iterations=0,
        termination="stationary_zero_subgradient",
    )
    return SingleResult(
        x_star=x,
        pattern=np.ones(n, dtype=np.uint8),
        z_star=np.zeros(n),
        trace=trace,
        fully_suppressed=True,
    )
