"""Small dense linear-algebra kernels used throughout the package.

Everything here is a pure function of its inputs: the polar factor on the
Stiefel manifold, a dominant singular pair by power iteration, the adjusted
variance of correlated components, and the strong-convexity constant of a
level set.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError


def _as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-d array with positive dimensions")
    return a


@dataclass
class PolarFactor:
    """Orthonormal factor of a polar decomposition.

    ``u`` has orthonormal columns.  ``rank_deficient`` is set when the input
    did not have full column rank, in which case the factor was completed
    with an arbitrary orthonormal basis of the residual space (the value of
    the maximized linear form is unaffected by that choice).
    """

    u: np.ndarray
    rank_deficient: bool


def polar_factor(c, rank_tol=None):
    """Maximizer of the linear form ``<c, x> = trace(c.T @ x)`` over matrices
    with orthonormal columns.

    Parameters
    ----------
    c : (p, m) array_like, p >= m >= 1
        Direction matrix; must be finite.
    rank_tol : float, optional
        Singular values at or below this threshold are treated as zero.
        Defaults to ``max(p, m) * eps * sigma_1(c)``.

    Returns
    -------
    PolarFactor
        The orthonormal factor ``u``; ``<c, u>`` equals the sum of the
        singular values of ``c``.  For full-rank ``c`` this is the unique
        matrix ``c @ (c.T c)^{-1/2}``, computed here through the SVD for
        numerical stability near rank deficiency.
    """
    c = _as_matrix(c, "c")
    p, m = c.shape
    if p < m:
        raise ValueError(f"need p >= m, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise NumericalError("polar_factor: input contains NaN or Inf")
    w, s, vt = np.linalg.svd(c, full_matrices=False)
    if rank_tol is None:
        rank_tol = max(p, m) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    return PolarFactor(u=w @ vt, rank_deficient=bool(s[-1] <= rank_tol))


@dataclass
class RankOneFactors:
    """Dominant singular triple ``sigma, u, v`` with unit-norm ``u`` and ``v``.

    ``zero_matrix`` marks the degenerate input ``a == 0``, for which
    ``sigma = 0`` and ``u``, ``v`` are arbitrary unit vectors.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    zero_matrix: bool = False


def rank_one_svd(a, tol=1e-12, max_iter=10000):
    """Dominant singular value and singular vectors of ``a``.

    Runs power iteration on the smaller of the two Gram operators
    (``a.T a`` if the matrix has no more columns than rows, ``a a.T``
    otherwise), applied in factored form so no Gram matrix is built.  The
    iteration starts from the column of largest norm, which always has a
    nonzero image, and stops once the eigen-residual of the Rayleigh
    quotient drops below ``tol`` relative to the eigenvalue.
    """
    a = _as_matrix(a, "a")
    p, k = a.shape
    col_sq = np.einsum("ij,ij->j", a, a)
    if not col_sq.any():
        u = np.zeros(p)
        u[0] = 1.0
        v = np.zeros(k)
        v[0] = 1.0
        return RankOneFactors(sigma=0.0, u=u, v=v, zero_matrix=True)
    j = int(np.argmax(col_sq))
    right_side = k <= p
    if right_side:
        w = np.zeros(k)
        w[j] = 1.0

        def op(w):
            return a.T @ (a @ w)
    else:
        w = a[:, j] / np.sqrt(col_sq[j])

        def op(w):
            return a @ (a.T @ w)

    lam = 0.0
    with np.errstate(over="ignore", invalid="ignore"):  # breakdown raised below
        for _ in range(max_iter):
            z = op(w)
            lam = float(w @ z)
            zn = np.linalg.norm(z)
            if zn == 0.0 or not np.isfinite(zn):
                raise NumericalError("rank_one_svd: power iteration broke down")
            if np.linalg.norm(z - lam * w) <= tol * max(lam, np.finfo(float).tiny):
                break
            w = z / zn

    if right_side:
        v = w
        av = a @ v
        sigma = float(np.linalg.norm(av))
        u = av / sigma
    else:
        u = w
        atu = a.T @ u
        sigma = float(np.linalg.norm(atu))
        v = atu / sigma
    return RankOneFactors(sigma=sigma, u=u, v=v)


def qr_nonneg(y):
    """Reduced QR factorization with a nonnegative diagonal of R."""
    q, r = np.linalg.qr(y)
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    return q * signs, r * signs[:, None]


def adjusted_variance(y):
    """Total variance of the component sample matrix ``y``, corrected for
    correlation between columns.

    Equals ``trace(r @ r)`` for the QR factorization ``y = q r`` with a
    nonnegative diagonal of ``r``; since ``r`` is triangular this is the sum
    of its squared diagonal entries.  Rank-deficient ``y`` yields zeros on
    the diagonal, which contribute nothing.
    """
    y = _as_matrix(y, "y")
    if y.shape[0] < y.shape[1]:
        raise ValueError("need at least as many rows as columns")
    _, r = qr_nonneg(y)
    d = np.diag(r)
    return float(d @ d)


def level_set_convexity(sigma_f, l_f, omega):
    """Strong-convexity constant of the level set ``{x : f(x) <= omega}`` of
    a nonnegative strongly convex function with convexity parameter
    ``sigma_f`` and gradient Lipschitz constant ``l_f``:
    ``sigma_f / sqrt(2 * omega * l_f)``.
    """
    if sigma_f <= 0 or l_f <= 0 or omega <= 0:
        raise ValueError("all arguments must be strictly positive")
    return sigma_f / np.sqrt(2.0 * omega * l_f)
