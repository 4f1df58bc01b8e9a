"""Single-unit sparse PCA.

The data matrix ``a`` is p-by-n with the n variables in its columns.  Both
penalized objectives are maximized over the unit sphere in R^p, which keeps
the search space small when there are far more variables than samples:

* l1 penalty:  f(x) = sum_i [ |a_i.T x| - gamma ]_+^2
* l0 penalty:  f(x) = sum_i [ (a_i.T x)^2 - gamma ]_+

A maximizer x defines a sparsity pattern over the variables, and the loading
vector z is recovered on that pattern either in closed form (l0) or from the
dominant singular pair of the active columns (l1).
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptySupportError
from .gradient import IterateTrace, ObjectiveOracle, Sphere, maximize
from .linalg import rank_one_svd


@dataclass
class PenaltyConfig:
    """Penalty kind (``"l1"`` or ``"l0"``) and sparsity parameter gamma.

    Any ``gamma >= 0`` is accepted; values at or above the column-norm
    threshold (see :func:`gamma_max`) force the all-zero loading vector.
    """

    kind: str
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("l1", "l0"):
            raise ValueError("kind must be 'l1' or 'l0'")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")


@dataclass
class SingleResult:
    """Outcome of a single-unit solve.

    ``pattern`` follows the 0-marks-active convention: entry i is 0 when
    variable i carries a nonzero loading and 1 when it is suppressed.
    ``z_star`` is unit-norm and zero exactly on the pattern, except in the
    fully suppressed case where it is the zero vector.
    """

    x_star: np.ndarray
    pattern: np.ndarray
    z_star: np.ndarray
    trace: IterateTrace
    fully_suppressed: bool = False


def column_norms(a):
    return np.linalg.norm(a, axis=0)


def l1_value(a, gamma, x):
    """sum_i [ |a_i.T x| - gamma ]_+^2 for unit-norm ``x``."""
    t = np.maximum(np.abs(a.T @ x) - gamma, 0.0)
    return float(t @ t)


def l1_subgradient(a, gamma, x):
    """Ascent direction sum_i [ |a_i.T x| - gamma ]_+ sign(a_i.T x) a_i.

    This is half the gradient of :func:`l1_value`; the factor does not
    change the normalized step.  The zero vector is returned exactly when
    every threshold is inactive.
    """
    s = a.T @ x
    t = np.maximum(np.abs(s) - gamma, 0.0)
    return a @ (t * np.sign(s))


def l0_value(a, gamma, x):
    """sum_i [ (a_i.T x)^2 - gamma ]_+ for unit-norm ``x``."""
    q = (a.T @ x) ** 2 - gamma
    return float(q[q > 0.0].sum())


def l0_subgradient(a, gamma, x):
    """Ascent direction sum over active i of (a_i.T x) a_i, where i is
    active when (a_i.T x)^2 > gamma.  Half the gradient of
    :func:`l0_value`, like the l1 counterpart."""
    s = a.T @ x
    return a @ np.where(s * s > gamma, s, 0.0)


def gamma_max(a, kind):
    """Smallest gamma that suppresses every variable: the largest column
    norm for the l1 penalty, its square for the l0 penalty."""
    norms = column_norms(np.asarray(a, dtype=float))
    top = float(norms.max()) if norms.size else 0.0
    return top if kind == "l1" else top * top


def cardinality_upper_bound(a, penalty):
    """Number of columns whose norm survives the suppression threshold.

    Every solve returns a loading vector with at most this many nonzeros,
    since a variable with ||a_i|| <= gamma (l1) or ||a_i||^2 <= gamma (l0)
    is necessarily zero at any maximizer.
    """
    norms = column_norms(np.asarray(a, dtype=float))
    if penalty.kind == "l1":
        return int((norms > penalty.gamma).sum())
    return int((norms * norms > penalty.gamma).sum())


def init_column(a):
    """Starting point on the sphere: the column of largest norm, normalized.
    Guarantees at least one active variable whenever gamma is below the
    suppression threshold.  Ties go to the lowest column index."""
    a = np.asarray(a, dtype=float)
    norms = column_norms(a)
    i = int(np.argmax(norms))
    if norms[i] == 0.0:
        raise ValueError("cannot initialize from an all-zero matrix")
    return a[:, i] / norms[i]


def z_from_x_l1(a, gamma, x):
    """Closed-form unit loading vector for the l1 penalty at ``x``:
    z_i proportional to sign(a_i.T x) [ |a_i.T x| - gamma ]_+, supported
    exactly on { i : |a_i.T x| > gamma }."""
    s = a.T @ x
    t = np.maximum(np.abs(s) - gamma, 0.0)
    if not np.any(t > 0.0):
        raise EmptySupportError("no variable exceeds the threshold at x")
    z = np.zeros_like(t)
    active = t > 0.0
    z[active] = (np.sign(s) * t)[active]
    return z / np.linalg.norm(z)


def z_from_x_l0(a, gamma, x):
    """Closed-form unit loading vector for the l0 penalty at ``x``:
    z proportional to a_i.T x on { i : (a_i.T x)^2 > gamma }, zero off it."""
    s = a.T @ x
    active = s * s > gamma
    if not np.any(active):
        raise EmptySupportError("no variable exceeds the threshold at x")
    z = np.where(active, s, 0.0)
    return z / np.linalg.norm(z)


def _masked_l0_fill(s, active):
    # active entries satisfy s^2 > gamma >= 0, so the norm is positive
    z = np.zeros_like(s)
    z[active] = s[active]
    return z / np.linalg.norm(z)


def rank_one_fill(a, active):
    """Dominant singular pair of the active-column submatrix, embedded back
    into R^n.  Returns ``(x, z)`` with the sign fixed so the largest-
    magnitude entry of ``z`` is positive."""
    sub = rank_one_svd(a[:, active])
    z = np.zeros(a.shape[1])
    z[active] = sub.v
    flip = 1.0 if z[np.argmax(np.abs(z))] >= 0.0 else -1.0
    return flip * sub.u, flip * z


def active_mask(a, penalty, x):
    """Active variables at ``x``: threshold rule combined with the column
    norm guard, so suppression by the norm bound is exact in floating
    point."""
    s = a.T @ x
    norms = column_norms(a)
    if penalty.kind == "l1":
        return (np.abs(s) > penalty.gamma) & (norms > penalty.gamma)
    return (s * s > penalty.gamma) & (norms * norms > penalty.gamma)


def make_oracle(a, penalty):
    """Objective/direction pair for :func:`sparsepca.gradient.maximize`."""
    gamma = penalty.gamma
    if penalty.kind == "l1":
        return ObjectiveOracle(
            value=lambda x: l1_value(a, gamma, x),
            subgrad=lambda x: l1_subgradient(a, gamma, x),
        )
    return ObjectiveOracle(
        value=lambda x: l0_value(a, gamma, x),
        subgrad=lambda x: l0_subgradient(a, gamma, x),
    )


def solve_single(a, penalty, x0=None, stop=None, record_steps=False):
    """Extract one sparse loading vector from ``a``.

    Parameters
    ----------
    a : (p, n) array_like
        Data matrix, variables in columns.
    penalty : PenaltyConfig
    x0 : (p,) array_like, optional
        Unit-norm starting point; defaults to :func:`init_column`.
    stop : StopRule, optional

    Returns
    -------
    SingleResult
        The pattern marks variables suppressed at the final iterate.  The
        loading vector is filled from the dominant singular pair of the
        active columns for the l1 penalty and in closed form for the l0
        penalty.  When every variable is suppressed (gamma at or above the
        threshold of :func:`gamma_max`) the loading vector is zero and
        ``fully_suppressed`` is set.
    """
    a = np.asarray(a, dtype=float)
    if x0 is None:
        x0 = init_column(a)
    trace = maximize(
        make_oracle(a, penalty),
        Sphere(dim=a.shape[0]),
        x0,
        stop=stop,
        record_steps=record_steps,
    )
    x = trace.x
    active = active_mask(a, penalty, x)
    pattern = np.where(active, 0, 1).astype(np.uint8)
    n = a.shape[1]
    if not np.any(active):
        return SingleResult(
            x_star=x,
            pattern=np.ones(n, dtype=np.uint8),
            z_star=np.zeros(n),
            trace=trace,
            fully_suppressed=True,
        )
    if penalty.kind == "l1":
        _, z = rank_one_fill(a, active)
    else:
        z = _masked_l0_fill(a.T @ x, active)
    return SingleResult(x_star=x, pattern=pattern, z_star=z, trace=trace)
