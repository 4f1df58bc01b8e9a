"""Block sparse PCA: m components extracted at once.

The iterate X lives on the Stiefel manifold of p-by-m matrices with
orthonormal columns, and the two penalized objectives generalize the
single-unit ones column by column, with positive weights mu_j:

* l1 penalty:  f(X) = sum_j sum_i [ mu_j |a_i.T x_j| - gamma ]_+^2
* l0 penalty:  f(X) = sum_j sum_i [ (mu_j a_i.T x_j)^2 - gamma ]_+

At gamma = 0 the l1 objective equals trace(X.T A A.T X N^2), so with
distinct weights the solver recovers the m dominant left singular vectors
of the data matrix and plain PCA loadings.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .gradient import IterateTrace, ObjectiveOracle, Stiefel, maximize
from .postprocess import FillProblem, alternating_fill
from .single import PenaltyConfig, column_norms, init_column


@dataclass
class BlockConfig:
    """Component count m, penalty, and per-component weights.

    The weights default to all ones.  Distinct weights isolate the
    maximizers of the unpenalized problem; with the identity weights the
    printed column updates coincide with the single-unit ones.
    """

    m: int
    penalty: PenaltyConfig
    mu: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.mu is None:
            self.mu = np.ones(self.m)
        else:
            self.mu = np.asarray(self.mu, dtype=float)
        if self.mu.shape != (self.m,) or np.any(self.mu <= 0):
            raise ValueError("mu must hold m positive weights")


@dataclass
class BlockResult:
    """Outcome of a block solve.

    ``pattern`` is n-by-m with 0 marking an active loading.  Nonzero
    columns of ``z_star`` have unit norm; columns with no active entry are
    zero and flagged in ``zero_columns``.
    """

    x_star: np.ndarray
    pattern: np.ndarray
    z_star: np.ndarray
    trace: IterateTrace
    fully_suppressed: bool = False
    zero_columns: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))


def block_l1_value(a, cfg, x):
    """sum_j sum_i [ mu_j |a_i.T x_j| - gamma ]_+^2."""
    t = np.maximum(np.abs(a.T @ x) * cfg.mu[None, :] - cfg.penalty.gamma, 0.0)
    return float(np.vdot(t, t))


def block_l1_subgradient(a, cfg, x):
    """Column j is mu_j * sum_i [ mu_j |a_i.T x_j| - gamma ]_+ sign(a_i.T x_j) a_i,
    half the gradient of :func:`block_l1_value`.  The printed column update
    without the weights is recovered at mu = 1."""
    s = a.T @ x
    t = np.maximum(np.abs(s) * cfg.mu[None, :] - cfg.penalty.gamma, 0.0)
    return a @ (t * np.sign(s) * cfg.mu[None, :])


def block_l0_value(a, cfg, x):
    """sum_j sum_i [ (mu_j a_i.T x_j)^2 - gamma ]_+."""
    q = (a.T @ x) ** 2 * (cfg.mu**2)[None, :] - cfg.penalty.gamma
    return float(q[q > 0.0].sum())


def block_l0_subgradient(a, cfg, x):
    """Column j is mu_j^2 * sum over active i of (a_i.T x_j) a_i, with i
    active when (mu_j a_i.T x_j)^2 > gamma; half the gradient of
    :func:`block_l0_value`."""
    s = a.T @ x
    q = s * s * (cfg.mu**2)[None, :]
    return a @ (np.where(q > cfg.penalty.gamma, s, 0.0) * (cfg.mu**2)[None, :])


def make_block_oracle(a, cfg):
    if cfg.penalty.kind == "l1":
        return ObjectiveOracle(
            value=lambda x: block_l1_value(a, cfg, x),
            subgrad=lambda x: block_l1_subgradient(a, cfg, x),
        )
    return ObjectiveOracle(
        value=lambda x: block_l0_value(a, cfg, x),
        subgrad=lambda x: block_l0_subgradient(a, cfg, x),
    )


def _columnwise_unit(z, active):
    z = np.where(active, z, 0.0)
    norms = np.linalg.norm(z, axis=0)
    out = np.divide(z, norms[None, :], out=np.zeros_like(z), where=norms > 0.0)
    return out, norms == 0.0


def z_from_x_block_l1(a, cfg, x):
    """Closed-form loading matrix for the l1 penalty at X: entry (i, j) is
    proportional to sign(a_i.T x_j) [ mu_j |a_i.T x_j| - gamma ]_+ with each
    nonzero column normalized.  Returns ``(z, empty_columns)``; a column
    with empty support is zero and flagged rather than an error."""
    s = a.T @ x
    t = np.maximum(np.abs(s) * cfg.mu[None, :] - cfg.penalty.gamma, 0.0)
    return _columnwise_unit(np.sign(s) * t, t > 0.0)


def z_from_x_block_l0(a, cfg, x):
    """Closed-form loading matrix for the l0 penalty at X: column j is
    proportional to a_i.T x_j on { i : (mu_j a_i.T x_j)^2 > gamma }.
    Returns ``(z, empty_columns)``."""
    s = a.T @ x
    q = s * s * (cfg.mu**2)[None, :]
    return _columnwise_unit(s, q > cfg.penalty.gamma)


def init_block(a, m):
    """Starting point on the Stiefel manifold: first column from
    :func:`sparsepca.single.init_column`, completed to an orthonormal set by
    the Householder reflector that maps the first basis vector onto it."""
    a = np.asarray(a, dtype=float)
    p = a.shape[0]
    if m > p:
        raise ValueError("m may not exceed the number of rows")
    x1 = init_column(a)
    if m == 1:
        return x1[:, None]
    sign = 1.0 if x1[0] >= 0.0 else -1.0
    v = x1.copy()
    v[0] += sign
    h = np.eye(p) - (2.0 / (v @ v)) * np.outer(v, v)
    # first column of h is -sign * x1; replace it with x1 itself
    return np.column_stack([x1, h[:, 1:m]])


def block_active_mask(a, cfg, x):
    """Active entries at X: threshold rule combined with the column norm
    guard mu_j ||a_i|| > gamma (l1) or mu_j^2 ||a_i||^2 > gamma (l0)."""
    s = a.T @ x
    norms = column_norms(a)
    if cfg.penalty.kind == "l1":
        scaled = np.abs(s) * cfg.mu[None, :]
        bound = norms[:, None] * cfg.mu[None, :]
    else:
        scaled = s * s * (cfg.mu**2)[None, :]
        bound = (norms**2)[:, None] * (cfg.mu**2)[None, :]
    return (scaled > cfg.penalty.gamma) & (bound > cfg.penalty.gamma)


def solve_block(a, cfg, x0=None, stop=None, record_steps=False, fill_stop=None):
    """Extract cfg.m sparse loading vectors from ``a`` at once.

    Parameters
    ----------
    a : (p, n) array_like
    cfg : BlockConfig
        ``cfg.m`` may not exceed the rank of ``a`` (checked against
        min(p, n); the exact rank is the caller's contract).
    x0 : (p, m) array_like, optional
        Orthonormal columns; defaults to :func:`init_block`.
    stop : StopRule, optional
    fill_stop : StopRule, optional
        Stop rule for the alternating fill used with the l1 penalty.

    Returns
    -------
    BlockResult
        The loading matrix is filled by the alternating scheme for the l1
        penalty and in closed form for the l0 penalty, both restricted to
        the detected pattern.
    """
    a = np.asarray(a, dtype=float)
    p, n = a.shape
    if cfg.m > min(p, n):
        raise ValueError("m may not exceed min(p, n)")
    if x0 is None:
        x0 = init_block(a, cfg.m)
    trace = maximize(
        make_block_oracle(a, cfg),
        Stiefel(p=p, m=cfg.m),
        x0,
        stop=stop,
        record_steps=record_steps,
    )
    x = trace.x
    active = block_active_mask(a, cfg, x)
    pattern = np.where(active, 0, 1).astype(np.uint8)
    if not active.any():
        return BlockResult(
            x_star=x,
            pattern=np.ones((n, cfg.m), dtype=np.uint8),
            z_star=np.zeros((n, cfg.m)),
            trace=trace,
            fully_suppressed=True,
            zero_columns=np.ones(cfg.m, dtype=bool),
        )
    if cfg.penalty.kind == "l1":
        fill = alternating_fill(
            FillProblem(a=a, pattern=pattern, mu=cfg.mu, x0=x), stop=fill_stop
        )
        z, zero_cols = fill.z, fill.zero_columns
    else:
        s = a.T @ x
        z, zero_cols = _columnwise_unit(s, active)
    return BlockResult(
        x_star=x,
        pattern=pattern,
        z_star=z,
        trace=trace,
        zero_columns=zero_cols,
    )
