"""Scenario runners: each reproduces one counterexample or property sweep
and emits a flat table of (parameter, estimator, kind, estimate, stderr)
rows plus a summary dict of scenario-level diagnostics.

Seed layout.  A scenario's master seed addresses three disjoint substream
regions: replicate draws live on substreams [0, 2R); per-trial problem
instances derive a fresh seed from substream 2⁶³ + trial and draw their
own components on substreams 2⁶² + k; auxiliary draws (dominance check
points) use substreams 3·2⁶⁰ + k.  Every runner is a pure function of its
arguments, so reruns and thread-count changes reproduce rows byte for byte.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from . import rng
from .core import NoiseModel, DesignMatrix
from .projections import (
    _secular_root,
    project_segment,
    project_ball,
    project_ellipsoid,
    project_l1_ball,
    project_subspace,
    project_finite_set,
)
from .smoothers import (
    RidgeSpec,
    smoother_matrix,
    trace_df,
    hetero_ridge_optimism,
)
from .lasso import (
    lasso_penalized,
    lasso_penalized_batch,
    lasso_constrained,
    lasso_constrained_batch,
    constrained_least_squares,
    active_counts,
    stein_df_constrained_batch,
)
from .estimators import (
    FitterHandle,
    McConfig,
    default_batches,
    mc_optimism_covariance,
    mc_optimism_stein,
    mc_errors,
    diag_derivatives_rows,
)

__all__ = [
    "DEFAULT_SEED",
    "ResultRow",
    "ScenarioResult",
    "Scenario",
    "SCENARIOS",
    "run_scenario",
    "run_toy_segment_disk",
    "run_convexity_example",
    "run_genridge_monotonicity",
    "run_lasso_counterexample",
    "lasso_counterexample_design",
    "run_ridge_profile",
    "run_theorem2_sweep",
    "run_hetero_ridge_check",
]

DEFAULT_SEED = 20240101

# substream regions (per master seed); replicates occupy [0, 2R)
_INSTANCE_TAG = 1 << 63
_AUX_TAG = 1 << 62
_DOMINANCE_TAG = 3 << 60

CSV_COLUMNS = ("scenario", "param_name", "param_value", "estimator", "kind",
               "estimate", "stderr", "replicates", "seed")


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    param_name: str
    param_value: float
    estimator: str
    kind: str  # omega | df | train | pred
    estimate: float
    stderr: float
    replicates: int
    seed: int


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    rows: tuple
    summary: dict

    def write_csv(self, fh) -> None:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in self.rows:
            fh.write(f"{r.scenario},{r.param_name},{r.param_value!r},"
                     f"{r.estimator},{r.kind},{r.estimate!r},{r.stderr!r},"
                     f"{r.replicates},{r.seed}\n")

    def to_json(self) -> str:
        return json.dumps({
            "scenario": self.scenario,
            "rows": [asdict(r) for r in self.rows],
            "summary": self.summary,
        }, indent=2) + "\n"


def _row(scenario, param_name, param_value, estimator, kind, estimate,
         stderr, replicates, seed) -> ResultRow:
    return ResultRow(scenario, param_name, float(param_value), estimator,
                     kind, float(estimate), float(stderr), int(replicates),
                     int(seed))


def _finish(name, rows, summary) -> ScenarioResult:
    rows = tuple(sorted(
        rows, key=lambda r: (r.param_name, r.param_value, r.estimator, r.kind)))
    return ScenarioResult(name, rows, summary)


def _z(a, b):
    """Separation of two estimates in combined standard errors."""
    se = np.hypot(a.stderr, b.stderr)
    return float((a.value - b.value) / se) if se > 0 else np.inf


def _smoother_handle(S: np.ndarray, name: str) -> FitterHandle:
    tr = float(np.trace(S))
    return FitterHandle(
        fit=lambda y: S @ y,
        fit_batch=lambda Y: Y @ S.T,
        analytic_divergence=lambda y: tr,
        analytic_divergence_batch=lambda Y: np.full(Y.shape[0], tr),
        name=name)


def _projection_handle(fn: Callable, name: str) -> FitterHandle:
    return FitterHandle(fit=fn, fit_batch=fn, name=name)


def _cov_triple(name, param_name, param_value, handle, noise, mc):
    """omega/train/pred rows from the covariance route; returns (est, rows)."""
    est = mc_optimism_covariance(handle, noise, mc)
    err = mc_errors(handle, noise, mc)
    base = (name, param_name, param_value, "covariance_mc")
    rows = [
        _row(*base, "omega", est.value, est.stderr, mc.replicates, mc.seed),
        _row(*base, "train", err.train, err.train_se, mc.replicates, mc.seed),
        _row(*base, "pred", err.pred, err.pred_se, mc.replicates, mc.seed),
    ]
    return est, rows


# ---------------------------------------------------------------------------
# toy segment vs disk

def run_toy_segment_disk(mc: McConfig, law: str = "uniform") -> ScenarioResult:
    """Two nested model sets where the smaller one has larger optimism.

    Data: y = (y1, 2) with y1 ~ U(-1, 1) (or the matched gaussian law);
    model sets: the segment [-1,1]x{0} and the unit disk.
    """
    if law == "uniform":
        name = "toy-segment-disk"
        noise = NoiseModel.uniform_component([0.0, 2.0], 0, -1.0, 1.0)
    elif law == "gaussian":
        name = "toy-segment-disk-gaussian"
        noise = NoiseModel.gaussian_diag([0.0, 2.0], [1.0 / 3.0, 0.0])
    else:
        raise ValueError(f"unknown law {law!r}")
    handles = [
        (0.0, _projection_handle(lambda Y: project_segment(Y, -1.0, 1.0),
                                 "segment")),
        (1.0, _projection_handle(lambda Y: project_ball(Y, 1.0), "disk")),
    ]
    rows, ests = [], {}
    for pval, handle in handles:
        est, triple = _cov_triple(name, "model_set_index", pval, handle,
                                  noise, mc)
        rows += triple
        ests[pval] = est
    summary = {
        "law": law,
        "omega_segment": ests[0.0].value,
        "omega_disk": ests[1.0].value,
        "omega_gap": ests[0.0].value - ests[1.0].value,
        "omega_gap_z": _z(ests[0.0], ests[1.0]),
    }
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# convexity requirement

def run_convexity_example(mc: McConfig) -> ScenarioResult:
    """Non-convex two-point set vs the axis that contains it.

    y = (1, 0) + N(0, 0.1² I); the two-point set {(0,-1),(0,1)} sits inside
    the vertical axis yet has the larger optimism, so dropping convexity
    breaks the optimism-dominance ordering.
    """
    name = "convexity-example"
    noise = NoiseModel.gaussian_iso([1.0, 0.0], 0.01)
    axis = np.array([[0.0], [1.0]])
    points = np.array([[0.0, -1.0], [0.0, 1.0]])
    handles = [
        (0.0, _projection_handle(lambda Y: project_finite_set(Y, points),
                                 "two-point set")),
        (1.0, _projection_handle(lambda Y: project_subspace(Y, axis),
                                 "vertical axis")),
    ]
    rows, ests = [], {}
    for pval, handle in handles:
        est, triple = _cov_triple(name, "model_set_index", pval, handle,
                                  noise, mc)
        rows += triple
        ests[pval] = est
    summary = {
        "omega_two_point": ests[0.0].value,
        "omega_axis": ests[1.0].value,
        "omega_gap_z": _z(ests[0.0], ests[1.0]),
    }
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# generalized ridge monotonicity

def run_genridge_monotonicity(trials: int, seed: int,
                              lambda_grid=None) -> ScenarioResult:
    """Trace-df of X(XᵀX + λK)⁻¹Xᵀ over a λ grid for random (X, PSD K).

    Records the worst positive violation of df monotonicity in λ; the
    closed-form theory says there are none.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    name = "genridge-monotonicity"
    grid = np.sort(np.asarray(
        lambda_grid if lambda_grid is not None
        else [0.0, 0.1, 1.0, 10.0, 100.0], dtype=np.float64))
    n, p = 20, 5
    dfs = np.empty((trials, grid.size))
    for t in range(trials):
        tseed = rng.derive_seed(seed, _INSTANCE_TAG + t)
        X = DesignMatrix(rng.normals(tseed, [_AUX_TAG], n * p).reshape(n, p))
        A = rng.normals(tseed, [_AUX_TAG + 1], p * p).reshape(p, p)
        if t % 3 == 2:
            A = A[: p - 1]  # rank-deficient PSD K every third trial
        K = A.T @ A / p
        for k, lam in enumerate(grid):
            dfs[t, k] = trace_df(smoother_matrix(RidgeSpec(X, float(lam), K)))
    diffs = np.diff(dfs, axis=1)
    rows = [
        _row(name, "lambda", lam, "closed_form", "df",
             dfs[:, k].mean(),
             np.std(dfs[:, k], ddof=1) / np.sqrt(trials) if trials > 1 else 0.0,
             trials, seed)
        for k, lam in enumerate(grid)
    ]
    summary = {
        "trials": trials,
        "max_monotonicity_violation":
            float(max(0.0, diffs.max())) if diffs.size else 0.0,
        "max_rank_gap_at_lambda_zero":
            float(np.max(np.abs(dfs[:, 0] - p))) if grid[0] == 0.0 else None,
    }
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# lasso counterexample

def lasso_counterexample_design() -> DesignMatrix:
    """The fixed 1001×3 design with unit-norm columns.

    With rows indexed i = 1..n (n = 1001): x1 is constant except a zero in
    the last row; x2 alternates sign; x3 lives on the odd rows plus a 0.5
    in the last row.  The response mean is x1 + x2 - 0.1·x3.
    """
    n = 1001
    i = np.arange(1, n + 1)
    odd = (i % 2 == 1) & (i < n)
    even = (i % 2 == 0) & (i < n)
    a = np.sqrt(1.0 / (n - 1))
    x1 = np.where(i < n, a, 0.0)
    x2 = np.where(odd, a, np.where(even, -a, 0.0))
    x3 = np.where(odd, np.sqrt(3.0 / (2.0 * (n - 1))),
                  np.where(i == n, 0.5, 0.0))
    return DesignMatrix(np.column_stack([x1, x2, x3]))


_LASSO_BETA = np.array([1.0, 1.0, -0.1])


def _default_lambda_grid():
    return np.unique(np.concatenate([
        np.logspace(np.log10(0.01), np.log10(2.0), 21), [0.1, 0.5]]))


def _default_s_grid():
    return np.linspace(0.0, 1.1 * np.sum(np.abs(_LASSO_BETA)), 21)


def run_lasso_counterexample(mc: McConfig, lambda_grid=None, s_grid=None,
                             noise_as_sd: bool = False) -> ScenarioResult:
    """df of the penalized and constrained lasso over regularization grids.

    Stein-estimate df (mean active-set size, Kato-corrected for the
    constrained form) and covariance-MC df are emitted side by side; both
    show the non-monotone df profile.
    """
    name = "example-4-lasso"
    X = lasso_counterexample_design()
    n = X.n
    mu = X.entries @ _LASSO_BETA
    sigma2 = 0.02 ** 2 if noise_as_sd else 0.02
    noise = NoiseModel.gaussian_iso(mu, sigma2)
    lam_grid = np.sort(np.asarray(
        lambda_grid if lambda_grid is not None else _default_lambda_grid(),
        dtype=np.float64))
    s_values = np.sort(np.asarray(
        s_grid if s_grid is not None else _default_s_grid(), dtype=np.float64))

    rows = []
    df_by = {"lambda": {}, "s": {}}

    def emit(param_name, pval, handle):
        est, triple = _cov_triple(name, param_name, pval, handle, noise, mc)
        rows.extend(triple)
        cov_df = est.to_df(n, sigma2)
        stein = mc_optimism_stein(handle, noise, sigma2, mc)
        stein_df = stein.to_df(n, sigma2)
        base = (name, param_name, pval)
        rows.append(_row(*base, "covariance_mc", "df", cov_df.value,
                         cov_df.stderr, mc.replicates, mc.seed))
        rows.append(_row(*base, "stein_mc", "omega", stein.value,
                         stein.stderr, mc.replicates, mc.seed))
        rows.append(_row(*base, "stein_mc", "df", stein_df.value,
                         stein_df.stderr, mc.replicates, mc.seed))
        df_by[param_name][float(pval)] = (cov_df, stein_df)

    for lam in lam_grid:
        lam = float(lam)
        handle = FitterHandle(
            fit=lambda y, lam=lam: lasso_penalized(X, y, lam).mu_hat,
            fit_batch=lambda Y, lam=lam:
                lasso_penalized_batch(X, Y, lam) @ X.entries.T,
            analytic_divergence_batch=lambda Y, lam=lam:
                active_counts(lasso_penalized_batch(X, Y, lam)).astype(float),
            name=f"lasso penalized lambda={lam:g}")
        emit("lambda", lam, handle)

    for s in s_values:
        s = float(s)
        handle = FitterHandle(
            fit=lambda y, s=s: lasso_constrained(X, y, s).mu_hat,
            fit_batch=lambda Y, s=s:
                lasso_constrained_batch(X, Y, s) @ X.entries.T,
            analytic_divergence_batch=lambda Y, s=s:
                stein_df_constrained_batch(
                    lasso_constrained_batch(X, Y, s), s).astype(float),
            name=f"lasso constrained s={s:g}")
        emit("s", s, handle)

    # scenario-level diagnostics
    summary = {
        "sigma2": sigma2,
        "noise_as_sd": noise_as_sd,
        "max_df_disagreement_z": max(
            abs(_z(cov, st))
            for grid in df_by.values() for cov, st in grid.values()),
    }
    for a, b in ((0.5, 0.1),):
        if a in df_by["lambda"] and b in df_by["lambda"]:
            summary["df_gap_z_lambda_0.5_vs_0.1"] = {
                "covariance_mc": _z(df_by["lambda"][a][0], df_by["lambda"][b][0]),
                "stein_mc": _z(df_by["lambda"][a][1], df_by["lambda"][b][1]),
            }
    svals = sorted(df_by["s"])
    best = 0.0
    for i, si in enumerate(svals):
        for sj in svals[i + 1:]:
            best = max(best, _z(df_by["s"][si][0], df_by["s"][sj][0]))
    summary["max_s_nonmonotonicity_z"] = best
    # wide-sense nesting witness on the noiseless mean fit
    path = [np.sum(np.abs(lasso_penalized_batch(X, mu, float(lam))[0]))
            for lam in lam_grid]
    summary["max_l1_path_violation"] = float(max(
        [b - a for a, b in zip(path, path[1:])], default=0.0))
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# constrained ridge ellipsoid profile

def run_ridge_profile(mc: McConfig, rL_grid=None) -> ScenarioResult:
    """Optimism of projection onto ellipsoids (r, 0.1r) as r grows.

    y1 ~ N(3, 0.1^2), y2 ~ N(10, 3^2); the exact profile peaks at
    r = 2.4 and then falls, so the nesting S(1) subset L(r) alone does
    not order the optimisms.
    """
    name = "ridge-ellipsoid-profile"
    grid = np.asarray(rL_grid if rL_grid is not None
                      else np.arange(1.0, 10.0 + 1e-9, 0.5), dtype=np.float64)
    if np.any(grid < 1.0) or np.any(grid > 10.0):
        raise ValueError("rL grid must lie in [1, 10]")
    h = 0.1
    noise = NoiseModel.gaussian_diag([3.0, 10.0], [0.01, 9.0])
    rows, ests = [], {}
    for r in grid:
        r = float(r)
        radii = np.array([r, r * h])
        handle = _projection_handle(
            lambda Y, radii=radii: project_ellipsoid(Y, radii),
            name=f"ellipsoid r={r:g}")
        est, triple = _cov_triple(name, "r_L", r, handle, noise, mc)
        rows += triple
        ests[r] = est
    summary = {"h": h, "peak_r": float(max(ests, key=lambda r: ests[r].value))}
    if 1.0 in ests and 2.0 in ests:
        summary["rise_z_2_vs_1"] = _z(ests[2.0], ests[1.0])
    if 2.5 in ests and 10.0 in ests:
        summary["fall_z_2.5_vs_10"] = _z(ests[2.5], ests[10.0])
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# convex-projection dominance sweep

def _l1_ls_exact(Xm, Y, s, tol=1e-9):
    """Least squares under ‖β‖₁ <= s by sign-pattern enumeration.

    Small p only (3^p candidate faces).  Each face fixes a support and
    sign vector σ; the face optimum solves the bordered KKT system
    [2XᵀX σ; σᵀ 0]·[β; ν] = [2Xᵀy; s] and is kept when it verifies the
    full KKT conditions.  Exact up to linear-algebra roundoff, which the
    finite-difference dominance margins require; iterative-solver noise
    at the default tolerances is orders of magnitude too large.
    """
    n, p = Xm.shape
    if 3**p > 1000:
        raise ValueError("sign-pattern enumeration needs a small p")
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    m = Y.shape[0]
    G = Xm.T @ Xm
    C = Y @ Xm
    ynorm2 = np.einsum("ij,ij->i", Y, Y)

    beta = np.linalg.solve(G, C.T).T  # OLS rows
    todo = np.sum(np.abs(beta), axis=1) > s
    if not np.any(todo):
        return beta
    best = np.full(m, np.inf)
    found = ~todo
    for signs in itertools.product((-1.0, 0.0, 1.0), repeat=p):
        sig = np.array(signs)
        act = sig != 0.0
        k = int(act.sum())
        if k == 0:
            continue
        M = np.zeros((k + 1, k + 1))
        M[:k, :k] = 2.0 * G[np.ix_(act, act)]
        M[:k, k] = sig[act]
        M[k, :k] = sig[act]
        rhs = np.empty((k + 1, m))
        rhs[:k] = 2.0 * C[:, act].T
        rhs[k] = s
        sol = np.linalg.solve(M, rhs)
        bA, nu = sol[:k], sol[k]
        ok = todo & (nu >= -tol) & np.all(bA * sig[act, None] >= -tol, axis=0)
        if k < p:
            grad = 2.0 * (C[:, ~act].T - G[np.ix_(~act, act)] @ bA)
            ok &= np.all(np.abs(grad) <= nu[None, :] + tol, axis=0)
        if not np.any(ok):
            continue
        obj = (ynorm2 - 2.0 * np.einsum("km,km->m", C[:, act].T, bA)
               + np.einsum("km,kl,lm->m", bA, G[np.ix_(act, act)], bA))
        upd = ok & (obj < best)
        if np.any(upd):
            best[upd] = obj[upd]
            found |= upd
            block = np.zeros((int(upd.sum()), p))
            block[:, act] = bA[:, upd].T
            beta[upd] = block
    if not found.all():
        # tolerance corner: fall back to the iterative solver for the rest
        rest = ~found
        beta[rest] = constrained_least_squares(
            DesignMatrix(Xm), Y[rest],
            lambda B: project_l1_ball(B, s), tol=1e-18, max_iter=200000)
    return beta


def _ellipsoid_ls_exact(Xm, Y, radii):
    """Least squares under Σ β_j²/a_j² <= 1 via the secular equation.

    In coordinates γ = β/a the KKT system is (M + νI)γ = Bᵀy with
    B = X·diag(a) and M = BᵀB; in M's eigenbasis the multiplier ν solves
    the same secular equation as ellipsoid projection.
    """
    a = np.asarray(radii, dtype=np.float64)
    B = Xm * a[None, :]
    lam, Q = np.linalg.eigh(B.T @ B)
    W = (np.atleast_2d(np.asarray(Y, dtype=np.float64)) @ B) @ Q
    gamma = W / lam[None, :]
    outside = np.einsum("ij,ij->i", gamma, gamma) > 1.0
    if np.any(outside):
        nu = _secular_root(W[outside] ** 2, lam, 2e-15, 300)
        gamma[outside] = W[outside] / (lam[None, :] + nu[:, None])
    return (gamma @ Q.T) * a[None, :]


def run_theorem2_sweep(trials: int, seed: int,
                       replicates: int = 1000, threads: int = 1,
                       ) -> ScenarioResult:
    """Constrained least squares vs OLS on random instances.

    Per trial (random X with n=15, p=4, and a random convex coefficient
    constraint, alternating l1 ball and ellipsoid): checks per-coordinate
    finite-difference dominance of the constrained fit by OLS at 20 random
    response points, and that covariance-MC df of the constrained fit stays
    below the OLS df.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    name = "theorem2-sweep"
    n, p, sigma2 = 15, 4, 1.0
    eps = 1e-4
    rows = []
    max_violation = -np.inf
    max_df_z = -np.inf
    for t in range(trials):
        tseed = rng.derive_seed(seed, _INSTANCE_TAG + t)
        X = DesignMatrix(rng.normals(tseed, [_AUX_TAG], n * p).reshape(n, p))
        bstar = rng.normals(tseed, [_AUX_TAG + 1], p)[0]
        noise = NoiseModel.gaussian_iso(X.entries @ bstar, sigma2)
        if t % 2 == 0:
            s = 0.6 * float(np.sum(np.abs(bstar)))
            solve = lambda Y, s=s: _l1_ls_exact(X.entries, Y, s)
        else:
            radii = 0.6 * np.abs(bstar) + 0.1
            solve = lambda Y, radii=radii: _ellipsoid_ls_exact(
                X.entries, Y, radii)
        fit_batch = lambda Y, solve=solve: solve(Y) @ X.entries.T
        handle = FitterHandle(fit=lambda y, fb=fit_batch: fb(y[None, :])[0],
                              fit_batch=fit_batch,
                              name=f"constrained trial {t}")
        hat = smoother_matrix(RidgeSpec(X, 0.0))
        ols = _smoother_handle(hat, "ols")

        Yd = np.asarray(rng.normals(tseed, _DOMINANCE_TAG + np.arange(20), n))
        Yd = noise.mean + np.sqrt(sigma2) * Yd
        d_small = diag_derivatives_rows(handle, Yd, eps)
        d_large = diag_derivatives_rows(ols, Yd, eps)
        max_violation = max(max_violation, float(np.max(d_small - d_large)))

        mccfg = McConfig(replicates, default_batches(replicates), tseed,
                         threads=threads)
        cov = mc_optimism_covariance(handle, noise, mccfg)
        cov_df = cov.to_df(n, sigma2)
        ols_df = trace_df(hat)
        rows.append(_row(name, "trial", t, "covariance_mc", "df",
                         cov_df.value, cov_df.stderr, replicates, seed))
        rows.append(_row(name, "trial", t, "closed_form", "df",
                         ols_df, 0.0, replicates, seed))
        if cov_df.stderr > 0:
            max_df_z = max(max_df_z, (cov_df.value - ols_df) / cov_df.stderr)
    summary = {
        "trials": trials,
        "dominance_points_per_trial": 20,
        "fd_epsilon": eps,
        "max_dominance_violation": max_violation,
        "max_constrained_df_z": float(max_df_z),
    }
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# heteroscedastic ridge check

def run_hetero_ridge_check(trials: int, seed: int, lambda_grid=None,
                           replicates: int = 2000, threads: int = 1,
                           ) -> ScenarioResult:
    """Closed-form heteroscedastic ridge optimism vs covariance MC.

    Random designs (n=30, p=4) with per-observation variances drawn from
    [0.2, 2.0); rows aggregate over trials, while the per-trial agreement
    z-scores and the λ-monotonicity of the closed form go to the summary.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    name = "hetero-ridge-check"
    grid = np.sort(np.asarray(
        lambda_grid if lambda_grid is not None else [0.0, 0.5, 2.0, 10.0],
        dtype=np.float64))
    n, p = 30, 4
    closed = np.empty((trials, grid.size))
    mc_om = np.empty_like(closed)
    mc_tr = np.empty_like(closed)
    mc_pr = np.empty_like(closed)
    max_z = 0.0
    for t in range(trials):
        tseed = rng.derive_seed(seed, _INSTANCE_TAG + t)
        X = DesignMatrix(rng.normals(tseed, [_AUX_TAG], n * p).reshape(n, p))
        bstar = rng.normals(tseed, [_AUX_TAG + 1], p)[0]
        variances = 0.2 + 1.8 * rng.uniforms(tseed, [_AUX_TAG + 2], n)[0]
        noise = NoiseModel.gaussian_diag(X.entries @ bstar, variances)
        mccfg = McConfig(replicates, default_batches(replicates), tseed,
                         threads=threads)
        for k, lam in enumerate(grid):
            lam = float(lam)
            closed[t, k] = hetero_ridge_optimism(X, lam, variances)
            handle = _smoother_handle(smoother_matrix(RidgeSpec(X, lam)),
                                      f"ridge lambda={lam:g}")
            est = mc_optimism_covariance(handle, noise, mccfg)
            err = mc_errors(handle, noise, mccfg)
            mc_om[t, k] = est.value
            mc_tr[t, k] = err.train
            mc_pr[t, k] = err.pred
            if est.stderr > 0:
                max_z = max(max_z, abs(closed[t, k] - est.value) / est.stderr)
    rows = []
    for k, lam in enumerate(grid):
        def agg(mat):
            se = np.std(mat[:, k], ddof=1) / np.sqrt(trials) if trials > 1 else 0.0
            return float(mat[:, k].mean()), float(se)
        cm, cs = agg(closed)
        rows.append(_row(name, "lambda", lam, "closed_form", "omega",
                         cm, cs, trials, seed))
        for kind, mat in (("omega", mc_om), ("train", mc_tr), ("pred", mc_pr)):
            vm, vs = agg(mat)
            rows.append(_row(name, "lambda", lam, "covariance_mc", kind,
                             vm, vs, replicates, seed))
    mono = np.diff(closed, axis=1)
    summary = {
        "trials": trials,
        "replicates_per_trial": replicates,
        "max_agreement_z": float(max_z),
        "max_lambda_monotonicity_violation":
            float(max(0.0, mono.max())) if mono.size else 0.0,
    }
    return _finish(name, rows, summary)


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class Scenario:
    """CLI-facing description and adapter for one runner."""

    name: str
    anchor: str
    describe_lines: tuple
    grid_param: Optional[str]
    default_replicates: Optional[int]
    supports_noise_as_sd: bool
    runner: Callable  # (seed, replicates, grid, noise_as_sd, threads) -> ScenarioResult


def _mc(replicates, seed, threads):
    return McConfig(replicates, default_batches(replicates), seed,
                    threads=threads)


def _toy_runner(law, default_R):
    def run(seed, replicates, grid, noise_as_sd, threads):
        return run_toy_segment_disk(_mc(replicates or default_R, seed, threads),
                                    law=law)
    return run


def _convexity_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_convexity_example(_mc(replicates or 200000, seed, threads))


def _genridge_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_genridge_monotonicity(100, seed, lambda_grid=grid)


def _lasso_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_lasso_counterexample(_mc(replicates or 5000, seed, threads),
                                    lambda_grid=grid, noise_as_sd=noise_as_sd)


def _profile_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_ridge_profile(_mc(replicates or 20000, seed, threads),
                             rL_grid=grid)


def _theorem2_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_theorem2_sweep(100, seed, replicates=replicates or 1000,
                              threads=threads)


def _hetero_runner(seed, replicates, grid, noise_as_sd, threads):
    return run_hetero_ridge_check(20, seed, lambda_grid=grid,
                                  replicates=replicates or 2000,
                                  threads=threads)


SCENARIOS = {sc.name: sc for sc in (
    Scenario(
        name="convexity-example",
        anchor="two-point set vs containing axis: the dominance ordering "
               "needs convexity",
        describe_lines=(
            "data: y = (1, 0) + eps, eps ~ N(0, sigma^2 I), sigma = 0.1",
            "small model set: {(0,-1), (0,1)} (non-convex)",
            "large model set: the vertical axis (subspace)",
            "estimators: covariance_mc (omega, train, pred per set)",
            "default replicates: R=200000",
        ),
        grid_param=None, default_replicates=200000,
        supports_noise_as_sd=False, runner=_convexity_runner),
    Scenario(
        name="example-4-lasso",
        anchor="lasso df non-monotonicity in the regularization level "
               "(penalized and constrained forms)",
        describe_lines=(
            "design: fixed unit-norm columns, n=1001, p=3",
            "response: y = x1 + x2 - 0.1*x3 + eps, eps ~ N(0, 0.02) "
            "(variance; --noise-as-sd reads 0.02 as the sd)",
            "default replicates: R=5000",
            "lambda grid: 21 log-spaced in [0.01, 2] plus {0.1, 0.5}",
            "s grid: 21 points in [0, 2.31]",
            "estimators: stein_mc (mean active-set size; Kato correction "
            "for the constrained form) and covariance_mc",
        ),
        grid_param="lambda", default_replicates=5000,
        supports_noise_as_sd=True, runner=_lasso_runner),
    Scenario(
        name="genridge-monotonicity",
        anchor="generalized ridge trace-df is monotone in lambda for PSD "
               "penalty matrices",
        describe_lines=(
            "instances: 100 trials of random X (n=20, p=5) and random PSD K",
            "lambda grid: {0, 0.1, 1, 10, 100}",
            "estimator: closed_form trace df",
        ),
        grid_param="lambda", default_replicates=None,
        supports_noise_as_sd=False, runner=_genridge_runner),
    Scenario(
        name="hetero-ridge-check",
        anchor="heteroscedastic ridge optimism closed form vs Monte Carlo",
        describe_lines=(
            "instances: 20 trials of random X (n=30, p=4), variances in "
            "[0.2, 2.0)",
            "lambda grid: {0, 0.5, 2, 10}",
            "estimators: closed_form omega and covariance_mc "
            "(omega, train, pred), R=2000 per trial",
        ),
        grid_param="lambda", default_replicates=2000,
        supports_noise_as_sd=False, runner=_hetero_runner),
    Scenario(
        name="ridge-ellipsoid-profile",
        anchor="optimism profile of nested ellipsoid projections rises then "
               "falls in the outer radius",
        describe_lines=(
            "data: y1 ~ N(3, 0.1^2), y2 ~ N(10, 3^2)",
            "model sets: ellipsoids with radii (r_L, 0.1*r_L), r_L in [1, 10]",
            "r_L grid: {1.0, 1.5, ..., 10.0}",
            "default replicates: R=20000 per grid point",
            "estimators: covariance_mc (omega, train, pred)",
        ),
        grid_param="r_L", default_replicates=20000,
        supports_noise_as_sd=False, runner=_profile_runner),
    Scenario(
        name="theorem2-sweep",
        anchor="convex-constrained least squares never exceeds OLS "
               "self-influence, coordinate by coordinate",
        describe_lines=(
            "instances: 100 trials of random X (n=15, p=4), alternating "
            "l1-ball and ellipsoid coefficient constraints",
            "checks: per-coordinate derivative dominance at 20 response "
            "points per trial (eps=1e-4); covariance df <= OLS df",
            "default replicates: R=1000 per trial",
        ),
        grid_param=None, default_replicates=1000,
        supports_noise_as_sd=False, runner=_theorem2_runner),
    Scenario(
        name="toy-segment-disk",
        anchor="segment vs enclosing disk: the smaller model set has the "
               "larger optimism (uniform law)",
        describe_lines=(
            "data: y1 ~ U(-1, 1), y2 = 2 (constant)",
            "small model set: segment [-1, 1] x {0}",
            "large model set: unit disk",
            "estimators: covariance_mc (omega, train, pred per set)",
            "default replicates: R=1000000",
        ),
        grid_param=None, default_replicates=10**6,
        supports_noise_as_sd=False, runner=_toy_runner("uniform", 10**6)),
    Scenario(
        name="toy-segment-disk-gaussian",
        anchor="segment vs enclosing disk under the matched gaussian law",
        describe_lines=(
            "data: y ~ N((0, 2), diag(1/3, 0)); y2 = 2 (constant)",
            "small model set: segment [-1, 1] x {0}",
            "large model set: unit disk",
            "estimators: covariance_mc (omega, train, pred per set)",
            "default replicates: R=1000000",
        ),
        grid_param=None, default_replicates=10**6,
        supports_noise_as_sd=False, runner=_toy_runner("gaussian", 10**6)),
)}


def run_scenario(name: str, seed: int = DEFAULT_SEED, replicates=None,
                 grid=None, noise_as_sd: bool = False,
                 threads: int = 1) -> ScenarioResult:
    """Dispatch to a registered scenario; KeyError for unknown names."""
    sc = SCENARIOS[name]
    return sc.runner(seed=seed, replicates=replicates, grid=grid,
                     noise_as_sd=noise_as_sd, threads=threads)
