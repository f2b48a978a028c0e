"""Independent reference implementations used by the test suite.

Everything here is deliberately written against different primitives than
the package (scipy root finding, dense grids, bisection) so that an
agreement test is a real cross-check and not the same code twice.
"""

import numpy as np
from scipy.optimize import brentq


def ellipsoid_project_brentq(y, radii):
    """Scalar-path ellipsoid projection via scipy's brentq."""
    a = np.asarray(radii, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.sum((y / a) ** 2) <= 1.0:
        return y.copy()
    a2 = a * a

    def f(t):
        return float(np.sum(a2 * y * y / (a2 + t) ** 2) - 1.0)

    hi = float(np.max(a) * np.linalg.norm(y)) + 1.0
    while f(hi) > 0.0:
        hi *= 2.0
    t = brentq(f, 0.0, hi, xtol=1e-15, rtol=8.9e-16, maxiter=500)
    return a2 * y / (a2 + t)


def ellipsoid_boundary_grid(radii, counts):
    """Dense boundary grid: counts angles in 2-D, counts x counts in 3-D."""
    a = np.asarray(radii, dtype=np.float64)
    if a.shape == (2,):
        th = np.linspace(0.0, 2.0 * np.pi, counts, endpoint=False)
        return np.stack([a[0] * np.cos(th), a[1] * np.sin(th)], axis=1)
    if a.shape == (3,):
        th = np.linspace(0.0, np.pi, counts)          # polar
        ph = np.linspace(0.0, 2.0 * np.pi, counts, endpoint=False)
        T, P = np.meshgrid(th, ph, indexing="ij")
        return np.stack([
            a[0] * np.sin(T).ravel() * np.cos(P).ravel(),
            a[1] * np.sin(T).ravel() * np.sin(P).ravel(),
            a[2] * np.cos(T).ravel(),
        ], axis=1)
    raise ValueError("grids are built for 2-D and 3-D only")


def grid_distances(queries, grid, block=200_000):
    """Per-query min distance to the grid, computed in blocks."""
    Q = np.asarray(queries, dtype=np.float64)
    best = np.full(Q.shape[0], np.inf)
    for start in range(0, grid.shape[0], block):
        g = grid[start:start + block]
        d2 = (np.sum(Q * Q, axis=1)[:, None] - 2.0 * Q @ g.T
              + np.sum(g * g, axis=1)[None, :])
        best = np.minimum(best, d2.min(axis=1))
    return np.sqrt(np.maximum(best, 0.0))


def l1_project_bisection(b, s, iters=200):
    """Project one vector onto the l1 ball by bisecting the threshold."""
    b = np.asarray(b, dtype=np.float64)
    if np.sum(np.abs(b)) <= s:
        return b.copy()
    if s == 0.0:
        return np.zeros_like(b)
    lo, hi = 0.0, float(np.max(np.abs(b)))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.sum(np.maximum(np.abs(b) - mid, 0.0)) > s:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    return np.sign(b) * np.maximum(np.abs(b) - theta, 0.0)
