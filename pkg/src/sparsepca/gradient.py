"""Iterative maximization of a convex function over a compact set.

The scheme linearizes the objective at the current iterate and jumps to a
maximizer of the linear model over the feasible set.  Two feasible sets are
supported: a centered sphere in R^p and the Stiefel manifold of p-by-m
matrices with orthonormal columns.  On the sphere the step is the normalized
(sub)gradient; on the Stiefel manifold it is the polar factor of the
(sub)gradient.  The objective values along the run are nondecreasing
whenever the objective is convex, and that property is checked at runtime.

When additionally the subgradient norms are bounded away from zero on the
feasible set and either the objective or the feasible set is strongly
convex, the squared step norms are summable, so the iterates cannot wander
indefinitely.  The norm bound is mild: it holds whenever some point outside
the feasible set has a smaller objective value than every feasible point
(for the sphere, any convex objective minimized strictly inside).  For the
quadratic x -> x.T C x / 2 on the unit sphere both constants equal the
smallest eigenvalue of C, which gives the bound asserted in the tests.
"""

import time
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import NotConvexError, NumericalError, ZeroDirectionError
from .linalg import polar_factor


@dataclass(frozen=True)
class Sphere:
    """Sphere of radius ``radius`` centered at the origin of R^dim."""

    dim: int
    radius: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")


@dataclass(frozen=True)
class Stiefel:
    """p-by-m real matrices with orthonormal columns."""

    p: int
    m: int

    def __post_init__(self):
        if not 1 <= self.m <= self.p:
            raise ValueError("need p >= m >= 1")


Domain = Union[Sphere, Stiefel]


@dataclass
class ObjectiveOracle:
    """Callable pair for the objective: ``value(x)`` returns f(x), and
    ``subgrad(x)`` returns an element of the subdifferential at x (any
    positive multiple works, since the step only uses the direction)."""

    value: Callable[[np.ndarray], float]
    subgrad: Callable[[np.ndarray], np.ndarray]


@dataclass
class StopRule:
    """Termination control for :func:`maximize`.

    The run stops once the relative change of the objective drops to
    ``relative_tolerance`` or below (absolute change is used instead when
    the current objective value is below 1e-15 in magnitude), once the step
    norm drops to ``step_tolerance``, at a zero subgradient, or after
    ``max_iterations`` steps.
    """

    relative_tolerance: float = 1e-4
    max_iterations: int = 100000
    step_tolerance: float = 1e-12

    def __post_init__(self):
        if self.relative_tolerance <= 0:
            raise ValueError("relative_tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class IterateTrace:
    """Record of one maximization run."""

    x: np.ndarray
    objectives: np.ndarray
    iterations: int
    termination: str
    step_norms: Optional[np.ndarray] = None
    deltas: Optional[np.ndarray] = None
    wall_time_s: float = 0.0
    rank_deficient_steps: int = 0


def in_domain(domain, x, tol=1e-8):
    """Whether ``x`` satisfies the domain constraint within ``tol``."""
    x = np.asarray(x, dtype=float)
    if isinstance(domain, Sphere):
        return x.shape == (domain.dim,) and abs(
            np.linalg.norm(x) - domain.radius
        ) <= tol * max(1.0, domain.radius)
    gram = x.T @ x
    return x.shape == (domain.p, domain.m) and (
        np.linalg.norm(gram - np.eye(domain.m)) <= tol
    )


def domain_step(g, domain):
    """Point of the domain maximizing the linear form ``<g, y>``."""
    g = np.asarray(g, dtype=float)
    if isinstance(domain, Sphere):
        gn = np.linalg.norm(g)
        if gn == 0.0:
            raise ZeroDirectionError("zero direction has no maximizer on the sphere")
        return (domain.radius / gn) * g
    return polar_factor(g).u


def optimality_measure(oracle, domain, x):
    """First-order optimality gap ``max_{y in Q} <f'(x), y - x>``.

    Nonnegative everywhere; zero exactly at points satisfying the
    first-order optimality condition.  On the sphere of radius r the gap is
    ``r ||g|| - <g, x>``; on the Stiefel manifold it is the sum of the
    singular values of ``g`` minus ``<g, x>``.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(oracle.subgrad(x), dtype=float)
    if isinstance(domain, Sphere):
        best = domain.radius * np.linalg.norm(g)
    else:
        best = np.linalg.svd(g, compute_uv=False).sum()
    return float(best - np.vdot(g, x))


def _sphere_delta(g, x, radius):
    return radius * np.linalg.norm(g) - float(np.vdot(g, x))


def _stiefel_delta(g, x):
    return float(np.linalg.svd(g, compute_uv=False).sum() - np.vdot(g, x))


def maximize(oracle, domain, x0, stop=None, record_steps=False, record_deltas=False):
    """Run the linearize-and-step scheme from ``x0``.

    Parameters
    ----------
    oracle : ObjectiveOracle
        Convex objective (caller's contract) with a subgradient map.
    domain : Sphere or Stiefel
        Feasible set; ``x0`` must belong to it within 1e-8.
    stop : StopRule, optional
    record_steps : bool
        Store ``||x_{k+1} - x_k||`` for every step in the trace.
    record_deltas : bool
        Store the optimality gap at every visited iterate.  Costs an extra
        SVD per iteration on the Stiefel manifold, so it is off by default.

    Returns
    -------
    IterateTrace
        The objective values are nondecreasing; a decrease beyond roundoff
        raises :class:`NotConvexError`, and a non-finite objective raises
        :class:`NumericalError`.
    """
    if stop is None:
        stop = StopRule()
    x = np.asarray(x0, dtype=float)
    if not in_domain(domain, x):
        raise ValueError("x0 does not satisfy the domain constraint")
    t_start = time.perf_counter()

    f_prev = float(oracle.value(x))
    if not np.isfinite(f_prev):
        raise NumericalError("objective is not finite at the initial point")
    objectives = [f_prev]
    step_norms = [] if record_steps else None
    deltas = [] if record_deltas else None
    on_sphere = isinstance(domain, Sphere)
    rank_deficient_steps = 0
    termination = "max_iterations"
    iterations = 0

    for _ in range(stop.max_iterations):
        g = np.asarray(oracle.subgrad(x), dtype=float)
        if record_deltas:
            if on_sphere:
                deltas.append(_sphere_delta(g, x, domain.radius))
            else:
                deltas.append(_stiefel_delta(g, x))
        gn = np.linalg.norm(g)
        if not np.isfinite(gn):
            raise NumericalError("subgradient is not finite")
        if gn == 0.0:
            termination = "stationary_zero_subgradient"
            break
        if on_sphere:
            y = (domain.radius / gn) * g
        else:
            pf = polar_factor(g)
            y = pf.u
            if pf.rank_deficient:
                rank_deficient_steps += 1
        f_new = float(oracle.value(y))
        if not np.isfinite(f_new):
            raise NumericalError("objective is not finite")
        if f_new < f_prev - 1e-9 * (1.0 + abs(f_prev)):
            raise NotConvexError(
                "objective decreased from %r to %r; not a convex maximization"
                % (f_prev, f_new)
            )
        step = float(np.linalg.norm(y - x))
        x = y
        iterations += 1
        objectives.append(f_new)
        if record_steps:
            step_norms.append(step)
        change = f_new - f_prev
        denom = abs(f_prev) if abs(f_prev) > 1e-15 else 1.0
        f_prev = f_new
        if change / denom <= stop.relative_tolerance:
            termination = "converged"
            break
        if step <= stop.step_tolerance:
            termination = "small_step"
            break

    return IterateTrace(
        x=x,
        objectives=np.asarray(objectives),
        iterations=iterations,
        termination=termination,
        step_norms=None if step_norms is None else np.asarray(step_norms),
        deltas=None if deltas is None else np.asarray(deltas),
        wall_time_s=time.perf_counter() - t_start,
        rank_deficient_steps=rank_deficient_steps,
    )


def rate_bound_check(trace, f_star):
    """Whether ``min_{i<=k} delta_i <= (f_star - f(x0)) / (k + 1)`` holds at
    every recorded k.  The trace must have been produced with
    ``record_deltas=True``."""
    if trace.deltas is None:
        raise ValueError("trace was recorded without optimality gaps")
    d = np.asarray(trace.deltas, dtype=float)
    if d.size == 0:
        return True
    running_min = np.minimum.accumulate(d)
    bounds = (f_star - trace.objectives[0]) / (np.arange(d.size) + 1.0)
    return bool(np.all(running_min <= bounds))


def power_method(c, x0, stop=None, record_steps=False, record_deltas=False):
    """Largest-eigenvalue iteration for a symmetric positive semidefinite
    matrix ``c``, as the quadratic objective ``x -> x.T c x / 2`` maximized
    over the unit sphere.  The final objective approximates
    ``lambda_max(c) / 2``."""
    c = np.asarray(c, dtype=float)
    oracle = ObjectiveOracle(
        value=lambda x: 0.5 * float(x @ (c @ x)),
        subgrad=lambda x: c @ x,
    )
    return maximize(
        oracle,
        Sphere(dim=c.shape[0]),
        x0,
        stop=stop,
        record_steps=record_steps,
        record_deltas=record_deltas,
    )


def shifted_power_method(c, omega, x0, stop=None, **kwargs):
    """Power iteration on ``c + omega I`` for a symmetric ``c`` that need not
    be positive semidefinite.  ``omega`` must make the shift positive
    definite (checked by Cholesky).  Returns ``(trace, eigenvalue)`` where
    the reported eigenvalue undoes the shift: ``2 f_final - omega``."""
    c = np.asarray(c, dtype=float)
    shifted = c + omega * np.eye(c.shape[0])
    try:
        np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError:
        raise NotConvexError("c + omega I is not positive definite") from None
    trace = power_method(shifted, x0, stop=stop, **kwargs)
    return trace, float(2.0 * trace.objectives[-1] - omega)


def procrustes(c, d, omega, x0, stop=None, **kwargs):
    """Minimize ``||c - d @ x||_F^2`` over matrices with orthonormal columns.

    Solved as maximization of the shifted objective
    ``omega ||x||_F^2 - ||d x||_F^2 + 2 <d.T c, x>``, which is strongly
    convex for ``omega > lambda_max(d.T d)`` (caller supplies omega; an
    undersized shift surfaces as :class:`NotConvexError` through the
    monotonicity check).  Returns ``(trace, residual)`` with the squared
    Frobenius misfit ``||c - d @ x||_F^2`` at the final iterate.
    """
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    dtd = d.T @ d
    dtc = d.T @ c

    def value(x):
        return float(omega * np.vdot(x, x) - np.vdot(d @ x, d @ x) + 2.0 * np.vdot(dtc, x))

    def subgrad(x):
        return 2.0 * (omega * x - dtd @ x + dtc)

    trace = maximize(
        ObjectiveOracle(value=value, subgrad=subgrad),
        Stiefel(p=c.shape[0], m=c.shape[1]),
        x0,
        stop=stop,
        **kwargs,
    )
    misfit = c - d @ trace.x
    return trace, float(np.vdot(misfit, misfit))
