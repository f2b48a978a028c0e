"""Ridge-family linear smoothers and their closed-form optimism/df.

Plain ridge (penalty λ‖β‖²) is evaluated through the cached SVD of the
design; the generalized form (penalty λ·βᵀKβ, K symmetric) goes through a
Cholesky solve of XᵀX + λK and is rejected when that matrix is not
positive definite.

Degrees of freedom are reported dimensionless (trace units); optimism in
error units is obtained by scaling with 2σ²/n, or by the heteroscedastic
closed form when coordinates have unequal variances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import DesignMatrix

__all__ = [
    "RidgeSpec",
    "ridge_coefficients",
    "ridge_fit",
    "smoother_matrix",
    "trace_df",
    "ridge_df_closed_form",
    "hetero_ridge_optimism",
]


@dataclass(frozen=True, eq=False)
class RidgeSpec:
    """A ridge problem: design, penalty level, optional symmetric K."""

    X: DesignMatrix
    lam: float
    K: np.ndarray = None

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.K is not None:
            K = np.asarray(self.K, dtype=np.float64)
            p = self.X.p
            if K.shape != (p, p):
                raise ValueError("K must be p x p")
            if np.max(np.abs(K - K.T)) > 1e-10 * max(1.0, np.max(np.abs(K))):
                raise ValueError("K must be symmetric")
            object.__setattr__(self, "K", K)


def _svd_shrink(spec: RidgeSpec) -> np.ndarray:
    """Coefficient-space shrinkage factors d_j/(d_j² + λ) for K = I/None."""
    d = spec.X.singular_values
    if spec.lam == 0.0:
        dmax = d[0] if d.size else 0.0
        cutoff = dmax * max(spec.X.n, spec.X.p) * np.finfo(np.float64).eps
        if np.any(d <= cutoff):
            raise np.linalg.LinAlgError(
                "rank-deficient design with lambda = 0 has no unique solution")
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(d > 0, d / (d * d + spec.lam), 0.0)
    return shrink


def _is_plain(spec: RidgeSpec) -> bool:
    # An explicit K, even K = I, takes the general solve path so the two
    # routes stay independently checkable against each other.
    return spec.K is None


def _general_factor(spec: RidgeSpec):
    M = spec.X.entries.T @ spec.X.entries + spec.lam * spec.K
    try:
        return scipy.linalg.cho_factor(M)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "X^T X + lambda*K is not positive definite") from exc


def ridge_coefficients(spec: RidgeSpec, y) -> np.ndarray:
    """β̂ = (XᵀX + λK)⁻¹Xᵀy; accepts y of shape (n,) or (m, n)."""
    Y = np.asarray(y, dtype=np.float64)
    single = Y.ndim == 1
    rows = Y[None, :] if single else Y
    if _is_plain(spec):
        shrink = _svd_shrink(spec)
        beta = (rows @ spec.X.left_vectors * shrink) @ spec.X.right_vectors.T
    else:
        fac = _general_factor(spec)
        beta = scipy.linalg.cho_solve(fac, spec.X.entries.T @ rows.T).T
    return beta[0] if single else beta


def ridge_fit(spec: RidgeSpec, y) -> np.ndarray:
    """μ̂ = X·β̂; same shape convention as ridge_coefficients."""
    return ridge_coefficients(spec, y) @ spec.X.entries.T


def smoother_matrix(spec: RidgeSpec) -> np.ndarray:
    """The n×n matrix S with μ̂ = S·y; symmetric for symmetric K."""
    if _is_plain(spec):
        d = spec.X.singular_values
        shrink = _svd_shrink(spec) * d  # d_j²/(d_j² + λ)
        U = spec.X.left_vectors
        return (U * shrink) @ U.T
    fac = _general_factor(spec)
    X = spec.X.entries
    return X @ scipy.linalg.cho_solve(fac, X.T)


def trace_df(S) -> float:
    """Effective degrees of freedom of a linear smoother: tr(S)."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("smoother matrix must be square")
    return float(np.trace(S))


def ridge_df_closed_form(d, lam: float) -> float:
    """Σ_j d_j²/(d_j² + λ), the ridge df in trace units.

    Zero singular values contribute 0 (also at λ = 0, matching the rank
    of the hat matrix); strictly decreasing in λ while some d_j > 0.
    """
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0) or lam < 0:
        raise ValueError("singular values and lambda must be >= 0")
    if lam == 0.0 and not np.any(d > 0):
        raise ValueError("need lambda > 0 or some positive singular value")
    d2 = d[d > 0] ** 2
    return float(np.sum(d2 / (d2 + lam)))


def hetero_ridge_optimism(X: DesignMatrix, lam: float, variances) -> float:
    """Ridge optimism under uncorrelated heteroscedastic noise.

    ω = (2/n)·Σ_i σ_i² Σ_j [d_j²/(d_j² + λ)]·u_ij², with u_ij the entries
    of the n×p matrix of left singular vectors.  With equal variances this
    reduces exactly to (2σ²/n)·ridge_df_closed_form(d, λ).
    """
    var = np.asarray(variances, dtype=np.float64)
    if var.shape != (X.n,) or np.any(var < 0):
        raise ValueError("variances must be length n and >= 0")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    d = X.singular_values
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(d > 0, d * d / (d * d + lam), 0.0)
    per_obs = (X.left_vectors ** 2) @ shrink
    return 2.0 / X.n * float(var @ per_obs)
