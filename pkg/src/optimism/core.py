"""Shared domain types: responses, designs, noise models, optimism estimates.

Conventions used throughout the package:

* errors are per-observation squared errors, (1/n)·sums;
* optimism ω and degrees of freedom are related by df = ω·n/(2σ²),
  with σ² always supplied by a noise model, never estimated from data;
* every random draw is addressed by a (master_seed, substream) pair
  (see :mod:`optimism.rng`), substream = replicate index by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng

__all__ = [
    "DesignMatrix",
    "NoiseModel",
    "OptimismEstimate",
    "as_observation_vector",
    "training_error",
    "df_from_optimism",
    "optimism_from_df",
    "draw",
    "draw_block",
]


def as_observation_vector(values) -> np.ndarray:
    """Validate a response vector: 1-D, length ≥ 1, all entries finite."""
    y = np.asarray(values, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] < 1:
        raise ValueError("observation vector must be 1-D with length >= 1")
    if not np.all(np.isfinite(y)):
        raise ValueError("observation vector has non-finite entries")
    return y


class DesignMatrix:
    """An n×p design with its SVD cached at construction.

    Orientation follows the thin SVD X = U·diag(d)·Vᵀ with U of shape n×p.
    Requires n ≥ p so that ``left_vectors[i, j]`` indexes observations i and
    singular directions j, which is how the heteroscedastic closed form
    consumes it.
    """

    def __init__(self, entries):
        X = np.asarray(entries, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("design must be a 2-D array")
        n, p = X.shape
        if n < p:
            raise ValueError(f"design must have n >= p, got {n} x {p}")
        if not np.all(np.isfinite(X)):
            raise ValueError("design has non-finite entries")
        U, d, Vt = np.linalg.svd(X, full_matrices=False)
        scale = np.linalg.norm(X)
        recon = np.linalg.norm((U * d) @ Vt - X)
        if recon > 1e-10 * max(scale, 1.0):
            raise ValueError("cached SVD fails reconstruction tolerance")
        self.entries = X
        self.left_vectors = U
        self.singular_values = d
        self.right_vectors = Vt.T

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def p(self) -> int:
        return self.entries.shape[1]

    def __repr__(self):
        return f"DesignMatrix(n={self.n}, p={self.p})"


_KINDS = ("fixed", "gaussian_iso", "gaussian_diag", "uniform_component")


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Distribution of the response vector y.

    kinds:
      fixed               y = mean exactly, no randomness
      gaussian_iso        y = mean + N(0, σ²·I)
      gaussian_diag       y = mean + N(0, diag(variances))
      uniform_component   one coordinate ~ U(lo, hi), all others fixed at mean

    Draw word budget is part of the determinism contract: gaussian kinds
    consume one 64-bit word per coordinate, uniform_component consumes one
    word total, fixed consumes none.
    """

    kind: str
    mean: np.ndarray
    variances: np.ndarray = field(default=None)  # per-coordinate
    index: int = 0      # uniform_component only
    lo: float = 0.0
    hi: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        mean = as_observation_vector(self.mean)
        object.__setattr__(self, "mean", mean)
        if self.variances is None:
            object.__setattr__(self, "variances", np.zeros_like(mean))
        var = np.asarray(self.variances, dtype=np.float64)
        if var.shape != mean.shape or np.any(var < 0) or not np.all(np.isfinite(var)):
            raise ValueError("variances must be finite, >= 0, same length as mean")
        object.__setattr__(self, "variances", var)
        if self.kind == "uniform_component":
            if not 0 <= self.index < mean.shape[0]:
                raise ValueError("uniform component index out of range")
            if not self.lo < self.hi:
                raise ValueError("uniform component needs lo < hi")
        mean.setflags(write=False)
        var.setflags(write=False)

    # -- constructors -------------------------------------------------

    @staticmethod
    def fixed(mean) -> "NoiseModel":
        return NoiseModel("fixed", np.asarray(mean, dtype=np.float64))

    @staticmethod
    def gaussian_iso(mean, sigma2: float) -> "NoiseModel":
        mean = np.asarray(mean, dtype=np.float64)
        if sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        return NoiseModel("gaussian_iso", mean, np.full(mean.shape, float(sigma2)))

    @staticmethod
    def gaussian_diag(mean, variances) -> "NoiseModel":
        return NoiseModel("gaussian_diag", np.asarray(mean, dtype=np.float64),
                          np.asarray(variances, dtype=np.float64))

    @staticmethod
    def uniform_component(mean, index: int, lo: float, hi: float) -> "NoiseModel":
        mean = np.asarray(mean, dtype=np.float64)
        if not 0 <= index < mean.shape[-1]:
            raise ValueError("uniform component index out of range")
        var = np.zeros(mean.shape)
        var[index] = (hi - lo) ** 2 / 12.0
        return NoiseModel("uniform_component", mean, var,
                          index=index, lo=float(lo), hi=float(hi))

    # -- properties ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    @property
    def is_gaussian(self) -> bool:
        return self.kind in ("gaussian_iso", "gaussian_diag")

    @property
    def sigma2(self) -> float:
        """Scalar noise variance; defined only when all coordinates agree."""
        v = self.variances
        if v.size and np.all(v == v[0]):
            return float(v[0])
        raise ValueError("noise model has no single scalar variance")


def draw(noise: NoiseModel, stream: rng.RngStream) -> np.ndarray:
    """One response sample; pure function of (noise, stream)."""
    return draw_block(noise, stream.master_seed, [stream.substream])[0]


def draw_block(noise: NoiseModel, master_seed, substreams) -> np.ndarray:
    """Samples for many substreams at once, one row per substream.

    Row i is bit-identical to ``draw(noise, RngStream(master_seed,
    substreams[i]))``, whatever the grouping of the calls.
    """
    substreams = np.atleast_1d(substreams)
    m, n = substreams.shape[0], noise.n
    if noise.kind == "fixed":
        return np.tile(noise.mean, (m, 1))
    if noise.kind == "uniform_component":
        u = rng.uniforms(master_seed, substreams, 1)[:, 0]
        out = np.tile(noise.mean, (m, 1))
        out[:, noise.index] = noise.lo + (noise.hi - noise.lo) * u
        return out
    # gaussian_iso / gaussian_diag share one path: scale per coordinate.
    z = rng.normals(master_seed, substreams, n)
    return noise.mean + z * np.sqrt(noise.variances)


@dataclass(frozen=True)
class OptimismEstimate:
    """An ω estimate with its standard error and provenance tag."""

    value: float
    stderr: float
    method: str  # covariance_mc | stein_mc | finite_difference | closed_form
    replicates: int = 0

    _METHODS = ("covariance_mc", "stein_mc", "finite_difference", "closed_form")

    def __post_init__(self):
        if self.method not in self._METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        # A zero stderr normally marks a closed form; degenerate Monte Carlo
        # (a linear fitter under Stein has zero variance across draws) is the
        # one legitimate exception, so only negative values are rejected.
        if self.stderr < 0:
            raise ValueError("stderr must be >= 0")

    def to_df(self, n: int, sigma2: float) -> "OptimismEstimate":
        """Rescale to df units: df = ω·n/(2σ²)."""
        factor = n / (2.0 * _positive_sigma2(sigma2))
        return OptimismEstimate(self.value * factor, self.stderr * factor,
                                self.method, self.replicates)


def _positive_sigma2(sigma2: float) -> float:
    if sigma2 <= 0:
        raise ValueError("sigma2 must be > 0")
    return float(sigma2)


def training_error(mu_hat, y) -> float:
    """Per-observation squared error (1/n)Σ(μ̂_i − y_i)²."""
    mu_hat = np.asarray(mu_hat, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if mu_hat.shape != y.shape:
        raise ValueError("mu_hat and y must have equal length")
    d = mu_hat - y
    return float(d @ d) / y.shape[-1]


def df_from_optimism(omega: float, n: int, sigma2: float) -> float:
    """df = ω·n/(2σ²)."""
    return omega * n / (2.0 * _positive_sigma2(sigma2))


def optimism_from_df(df: float, n: int, sigma2: float) -> float:
    """Inverse of :func:`df_from_optimism`."""
    return 2.0 * _positive_sigma2(sigma2) * df / n
