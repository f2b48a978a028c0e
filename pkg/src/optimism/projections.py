"""Euclidean projections onto the model sets used by the experiments.

Each projection maps a point to its nearest feasible point.  All functions
accept a single vector (n,) or a stack of rows (m, n) and preserve the
shape; the row form is what the Monte Carlo drivers feed them.

All sets are axis-aligned and centered at the origin; that is the only
geometry the experiments need.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ProjectionError",
    "project_segment",
    "project_ball",
    "project_ellipsoid",
    "project_l1_ball",
    "project_subspace",
    "project_finite_set",
]


class ProjectionError(RuntimeError):
    """A projection solver failed to converge (indicates a bug, not data)."""


def _rows(y):
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 1:
        return y[None, :], True
    if y.ndim == 2:
        return y, False
    raise ValueError("expected a vector or a stack of row vectors")


def _unrows(out, squeeze):
    return out[0] if squeeze else out


def project_segment(y, lo: float, hi: float):
    """Project onto {(t, 0, ..., 0) : lo <= t <= hi}."""
    if lo > hi:
        raise ValueError("segment needs lo <= hi")
    Y, squeeze = _rows(y)
    out = np.zeros_like(Y)
    out[:, 0] = np.clip(Y[:, 0], lo, hi)
    return _unrows(out, squeeze)


def project_ball(y, r: float):
    """Project onto the origin-centered Euclidean ball of radius r."""
    if r <= 0:
        raise ValueError("ball radius must be > 0")
    Y, squeeze = _rows(y)
    norms = np.linalg.norm(Y, axis=1)
    scale = np.ones_like(norms)
    outside = norms > r
    scale[outside] = r / norms[outside]
    return _unrows(Y * scale[:, None], squeeze)


def _secular_root(w, shifts, tol: float, max_iter: int):
    """Per-row root t > 0 of f(t) = Σ_j w_ij/(shifts_j + t)² − 1 = 0.

    Requires w >= 0, shifts > 0 and f(0) > 0 for every row.  f is convex
    and decreasing, so Newton from the left edge converges monotonically;
    a shrinking bracket with bisection is the safety net.  The same
    equation appears in ellipsoid projection (w = a²y², shifts = a²) and
    in ellipsoid-constrained least squares (w in the Gram eigenbasis).
    """
    t = np.zeros(w.shape[0])
    lo = np.zeros_like(t)
    hi = np.sqrt(np.sum(w, axis=1))  # f(hi) < Σw/hi² − 1 = 0
    converged = np.zeros(w.shape[0], dtype=bool)
    for _ in range(max_iter):
        denom = shifts[None, :] + t[:, None]
        f = np.einsum("ij,ij->i", w, denom**-2) - 1.0
        converged |= np.abs(f) <= tol
        if converged.all():
            return t
        lo = np.where(f > 0, np.maximum(lo, t), lo)
        hi = np.where(f < 0, np.minimum(hi, t), hi)
        fp = -2.0 * np.einsum("ij,ij->i", w, denom**-3)
        step = np.where(converged, t, t - f / fp)
        bad = (step <= lo) | (step >= hi) | ~np.isfinite(step)
        t = np.where(bad & ~converged, 0.5 * (lo + hi), step)
    raise ProjectionError("secular equation did not converge")


def project_ellipsoid(y, radii, tol: float = 1e-12, max_iter: int = 200):
    """Project onto the axis-aligned ellipsoid Σ x_i²/a_i² <= 1.

    Interior points are returned unchanged.  For exterior points the
    projection is x_i = a_i²·y_i/(a_i² + t) with t > 0 the root of the
    secular equation f(t) = Σ a_i²y_i²/(a_i² + t)² − 1 = 0.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    a = np.asarray(radii, dtype=np.float64)
    if np.any(a <= 0):
        raise ValueError("ellipsoid radii must be > 0")
    Y, squeeze = _rows(y)
    if a.shape != (Y.shape[1],):
        raise ValueError("radii length must match vector length")
    a2 = a * a

    out = Y.copy()
    outside = np.einsum("ij,j->i", Y * Y, 1.0 / a2) > 1.0
    if np.any(outside):
        Z = Y[outside]
        t = _secular_root(a2 * (Z * Z), a2, tol, max_iter)
        out[outside] = Z * (a2[None, :] / (a2[None, :] + t[:, None]))
    return _unrows(out, squeeze)


def project_l1_ball(b, s: float):
    """Project onto the l1 ball {β : ‖β‖₁ <= s} by sort-and-threshold."""
    if s < 0:
        raise ValueError("l1 radius must be >= 0")
    B, squeeze = _rows(b)
    out = B.copy()
    over = np.sum(np.abs(B), axis=1) > s
    if np.any(over):
        if s == 0.0:
            out[over] = 0.0
        else:
            Z = np.abs(B[over])
            u = np.sort(Z, axis=1)[:, ::-1]
            css = np.cumsum(u, axis=1) - s
            k = np.arange(1, B.shape[1] + 1, dtype=np.float64)
            rho = np.sum(u > css / k, axis=1)  # >= 1 because s > 0
            theta = css[np.arange(Z.shape[0]), rho - 1] / rho
            out[over] = np.sign(B[over]) * np.maximum(Z - theta[:, None], 0.0)
    return _unrows(out, squeeze)


def project_subspace(y, basis):
    """Project onto the span of orthonormal basis columns: Q·Qᵀ·y."""
    Q = np.asarray(basis, dtype=np.float64)
    if Q.ndim != 2:
        raise ValueError("basis must be an n x k matrix")
    gram = Q.T @ Q
    if np.max(np.abs(gram - np.eye(Q.shape[1]))) > 1e-10:
        raise ValueError("basis columns must be orthonormal")
    Y, squeeze = _rows(y)
    return _unrows((Y @ Q) @ Q.T, squeeze)


def project_finite_set(y, points):
    """Nearest point of a finite set; ties broken by lowest point index."""
    P = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if P.shape[0] < 1:
        raise ValueError("finite set must be nonempty")
    Y, squeeze = _rows(y)
    # argmin over squared distances; np.argmin takes the first minimum,
    # which implements the declared index tie-break.
    d2 = np.sum(Y * Y, axis=1)[:, None] - 2.0 * Y @ P.T + np.sum(P * P, axis=1)
    return _unrows(P[np.argmin(d2, axis=1)], squeeze)
