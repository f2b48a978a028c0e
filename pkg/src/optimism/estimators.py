"""Distribution-level optimism and df estimation.

Two independent routes to the same quantity:

* covariance Monte Carlo:  ω̂ = (2/n)·Σ_i sample-cov(μ̂_i, y_i), valid for
  any noise law;
* Stein average:           ω̂ = (2σ²/n)·E[Σ_i ∂μ̂_i/∂y_i], gaussian only,
  via analytic divergences or central finite differences.

Replicate r always draws on substream r of the configured seed (test draws
for prediction error use substream R + r), so estimates are bit-identical
for any thread count or batch grouping.  Standard errors come from batch
means over contiguous replicate blocks; 95% intervals are ±1.96·SE.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import NoiseModel, OptimismEstimate, draw_block

__all__ = [
    "EstimatorError",
    "FitterHandle",
    "McConfig",
    "ErrorEstimate",
    "default_batches",
    "mc_optimism_covariance",
    "mc_optimism_stein",
    "mc_errors",
    "finite_difference_divergence",
    "per_coordinate_derivatives",
    "per_coordinate_dominance",
    "diag_derivatives_rows",
]


class EstimatorError(RuntimeError):
    """Hard estimator failure (inapplicable method or fitter breakdown)."""


@dataclass(frozen=True)
class FitterHandle:
    """A deterministic modeling approach y → μ̂.

    `fit` maps one response vector to its fit.  The optional fields are
    performance/exactness hooks: `fit_batch` maps an (m, n) stack of rows
    to their fits (must equal row-by-row `fit`), and the divergence hooks
    supply Σ_i ∂μ̂_i/∂y_i analytically instead of by finite differences.
    """

    fit: Callable
    fit_batch: Optional[Callable] = None
    analytic_divergence: Optional[Callable] = None
    analytic_divergence_batch: Optional[Callable] = None
    name: str = ""

    def fit_rows(self, Y: np.ndarray) -> np.ndarray:
        if self.fit_batch is not None:
            return np.asarray(self.fit_batch(Y), dtype=np.float64)
        return np.stack([np.asarray(self.fit(y), dtype=np.float64) for y in Y])

    def divergence_rows(self, Y: np.ndarray, eps: float) -> np.ndarray:
        if self.analytic_divergence_batch is not None:
            return np.asarray(self.analytic_divergence_batch(Y), dtype=np.float64)
        if self.analytic_divergence is not None:
            return np.array([float(self.analytic_divergence(y)) for y in Y])
        return np.array([finite_difference_divergence(self, y, eps) for y in Y])


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo plan: replicate count, batch count for SEs, seed."""

    replicates: int = 5000
    batches: int = 50
    seed: int = 20240101
    fd_epsilon: float = 1e-5
    threads: int = 1

    def __post_init__(self):
        if self.replicates < 2:
            raise ValueError("need at least 2 replicates")
        if self.batches < 2 or self.batches > self.replicates:
            raise ValueError("batches must lie in [2, replicates]")
        if self.replicates % self.batches:
            raise ValueError("batches must divide replicates")
        if self.fd_epsilon <= 0:
            raise ValueError("fd_epsilon must be > 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def default_batches(replicates: int) -> int:
    """Largest batch count <= 50 dividing the replicates with >= 2 per batch.

    Prime counts fall back to one replicate per batch, which supports the
    Stein route; the covariance route needs within-batch pairs and rejects
    that configuration explicitly.
    """
    for b in range(min(50, replicates // 2), 1, -1):
        if replicates % b == 0:
            return b
    if replicates >= 2:
        return replicates
    raise ValueError("need at least 2 replicates")


def _map_ordered(jobs, threads: int):
    if threads <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


def _block_ranges(cfg: McConfig):
    size = cfg.replicates // cfg.batches
    return [(b * size, (b + 1) * size) for b in range(cfg.batches)]


def _fit_block(f: FitterHandle, Y: np.ndarray, base: int) -> np.ndarray:
    try:
        return f.fit_rows(Y)
    except Exception as exc:
        # locate the offending replicate; fitters are deterministic so a
        # row-by-row rerun reproduces the failure at the exact index
        for i, y in enumerate(Y):
            try:
                f.fit(y) if f.fit_batch is None else f.fit_rows(y[None, :])
            except Exception:
                raise EstimatorError(
                    f"fitter {f.name!r} failed on replicate {base + i}: {exc}"
                ) from exc
        raise EstimatorError(
            f"fitter {f.name!r} failed on replicates [{base}, {base + len(Y)})"
        ) from exc


def _draw_and_fit(f: FitterHandle, noise: NoiseModel, cfg: McConfig,
                  offset: int = 0, fit: bool = True):
    def job(lo, hi):
        Y = draw_block(noise, cfg.seed, np.arange(lo + offset, hi + offset))
        return (Y, _fit_block(f, Y, lo)) if fit else (Y, None)

    parts = _map_ordered([lambda lo=lo, hi=hi: job(lo, hi)
                          for lo, hi in _block_ranges(cfg)], cfg.threads)
    Y = np.concatenate([p[0] for p in parts])
    MU = np.concatenate([p[1] for p in parts]) if fit else None
    return Y, MU


def _batch_se(values: np.ndarray, cfg: McConfig) -> float:
    means = values.reshape(cfg.batches, -1).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(cfg.batches))


def _cov_omega(Y: np.ndarray, MU: np.ndarray) -> float:
    R, n = Y.shape
    yc = Y - Y.mean(axis=0)
    mc = MU - MU.mean(axis=0)
    return 2.0 / n * float(np.einsum("ij,ij->", yc, mc)) / (R - 1)


def mc_optimism_covariance(f: FitterHandle, noise: NoiseModel,
                           cfg: McConfig) -> OptimismEstimate:
    """ω̂ = (2/n)·Σ_i sample-cov(μ̂_i, y_i) over R replicate draws."""
    if cfg.replicates // cfg.batches < 2:
        raise ValueError("covariance batch SE needs >= 2 replicates per batch")
    Y, MU = _draw_and_fit(f, noise, cfg)
    value = _cov_omega(Y, MU)
    block_omegas = np.array([
        _cov_omega(Y[lo:hi], MU[lo:hi]) for lo, hi in _block_ranges(cfg)])
    se = float(np.std(block_omegas, ddof=1) / np.sqrt(cfg.batches))
    return OptimismEstimate(value, se, "covariance_mc", cfg.replicates)


def mc_optimism_stein(f: FitterHandle, noise: NoiseModel, sigma2: float,
                      cfg: McConfig) -> OptimismEstimate:
    """ω̂ = (2σ²/n)·mean divergence over R replicate draws (gaussian only)."""
    if not noise.is_gaussian:
        raise EstimatorError(
            f"Stein estimator requires gaussian noise, got {noise.kind!r}")
    if sigma2 < 0:
        raise ValueError("sigma2 must be >= 0")

    def job(lo, hi):
        Y = draw_block(noise, cfg.seed, np.arange(lo, hi))
        try:
            return f.divergence_rows(Y, cfg.fd_epsilon)
        except EstimatorError:
            raise
        except Exception as exc:
            raise EstimatorError(
                f"divergence of {f.name!r} failed on replicates [{lo}, {hi})"
            ) from exc

    parts = _map_ordered([lambda lo=lo, hi=hi: job(lo, hi)
                          for lo, hi in _block_ranges(cfg)], cfg.threads)
    div = np.concatenate(parts)
    scale = 2.0 * sigma2 / noise.n
    return OptimismEstimate(scale * float(div.mean()),
                            scale * _batch_se(div, cfg),
                            "stein_mc", cfg.replicates)


@dataclass(frozen=True)
class ErrorEstimate:
    """Mean training and prediction error with batch-mean SEs."""

    train: float
    train_se: float
    pred: float
    pred_se: float


def mc_errors(f: FitterHandle, noise: NoiseModel, cfg: McConfig) -> ErrorEstimate:
    """E_train and E_pred; replicate r trains on substream r, tests on R + r."""
    Y, MU = _draw_and_fit(f, noise, cfg)
    Ytest, _ = _draw_and_fit(f, noise, cfg, offset=cfg.replicates, fit=False)
    train = np.mean((MU - Y) ** 2, axis=1)
    pred = np.mean((MU - Ytest) ** 2, axis=1)
    return ErrorEstimate(float(train.mean()), _batch_se(train, cfg),
                         float(pred.mean()), _batch_se(pred, cfg))


def _perturbation_stack(y: np.ndarray, eps: float):
    n = y.shape[0]
    h = eps * (1.0 + np.abs(y))
    P = np.tile(y, (2 * n, 1))
    idx = np.arange(n)
    P[idx, idx] += h
    P[n + idx, idx] -= h
    # use the realized spacing: (y + h) - (y - h) after rounding
    return P, P[idx, idx] - P[n + idx, idx]


def per_coordinate_derivatives(f: FitterHandle, y, eps: float) -> np.ndarray:
    """Central-difference estimates of the diagonal Jacobian entries
    ∂μ̂_i/∂y_i, with per-coordinate spacing eps·(1 + |y_i|)."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    P, h = _perturbation_stack(y, eps)
    F = f.fit_rows(P)
    idx = np.arange(n)
    return (F[idx, idx] - F[n + idx, idx]) / h


def finite_difference_divergence(f: FitterHandle, y, eps: float) -> float:
    """Σ_i ∂μ̂_i/∂y_i by central differences."""
    return float(np.sum(per_coordinate_derivatives(f, y, eps)))


def per_coordinate_dominance(f_small: FitterHandle, f_large: FitterHandle,
                             y, eps: float) -> bool:
    """True iff every diagonal derivative of f_small is <= that of
    f_large + 1e-8 at y (central differences, shared spacing)."""
    d_small = per_coordinate_derivatives(f_small, y, eps)
    d_large = per_coordinate_derivatives(f_large, y, eps)
    return bool(np.all(d_small <= d_large + 1e-8))


def diag_derivatives_rows(f: FitterHandle, Ys: np.ndarray, eps: float) -> np.ndarray:
    """per_coordinate_derivatives for a stack of base points at once.

    Bundles all 2n perturbations of every row into one fit_rows call, which
    matters for iterative fitters whose batch solve is much cheaper than a
    per-point solve.  Returns an (m, n) array of diagonal derivatives.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    Ys = np.atleast_2d(np.asarray(Ys, dtype=np.float64))
    m, n = Ys.shape
    stacks = [_perturbation_stack(y, eps) for y in Ys]
    F = f.fit_rows(np.concatenate([P for P, _ in stacks]))
    idx = np.arange(n)
    out = np.empty((m, n))
    for k, (_, h) in enumerate(stacks):
        Fk = F[2 * n * k:2 * n * (k + 1)]
        out[k] = (Fk[idx, idx] - Fk[n + idx, idx]) / h
    return out
