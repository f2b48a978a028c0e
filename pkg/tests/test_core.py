"""Domain types: validation, draw determinism, and unit conversions."""

import numpy as np
import pytest

from optimism import rng
from optimism.core import (
    DesignMatrix,
    NoiseModel,
    OptimismEstimate,
    as_observation_vector,
    df_from_optimism,
    draw,
    draw_block,
    optimism_from_df,
    training_error,
)


def test_observation_vector_validation():
    y = as_observation_vector([1.0, 2.0])
    assert y.dtype == np.float64
    with pytest.raises(ValueError):
        as_observation_vector([[1.0, 2.0]])
    with pytest.raises(ValueError):
        as_observation_vector([])
    with pytest.raises(ValueError):
        as_observation_vector([1.0, np.nan])
    with pytest.raises(ValueError):
        as_observation_vector([np.inf, 0.0])


def test_design_matrix_svd_orientation():
    g = np.random.default_rng(0)
    X = g.normal(size=(8, 3))
    d = DesignMatrix(X)
    assert d.n == 8 and d.p == 3
    assert d.left_vectors.shape == (8, 3)
    assert d.singular_values.shape == (3,)
    assert d.right_vectors.shape == (3, 3)
    recon = (d.left_vectors * d.singular_values) @ d.right_vectors.T
    assert np.allclose(recon, X, atol=1e-12)
    # U has orthonormal columns
    assert np.allclose(d.left_vectors.T @ d.left_vectors, np.eye(3), atol=1e-12)


def test_design_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        DesignMatrix(np.ones((2, 5)))  # n < p
    with pytest.raises(ValueError):
        DesignMatrix(np.ones(4))
    with pytest.raises(ValueError):
        DesignMatrix([[1.0], [np.nan]])


def test_noise_constructors_and_moments():
    iso = NoiseModel.gaussian_iso([0.0, 1.0], 0.25)
    assert iso.is_gaussian and iso.sigma2 == 0.25
    diag = NoiseModel.gaussian_diag([0.0, 0.0], [1.0, 2.0])
    assert diag.is_gaussian
    with pytest.raises(ValueError):
        diag.sigma2  # no scalar variance
    uni = NoiseModel.uniform_component([0.0, 2.0], 0, -1.0, 1.0)
    assert not uni.is_gaussian
    assert np.allclose(uni.variances, [4.0 / 12.0, 0.0])
    fx = NoiseModel.fixed([3.0, 4.0])
    assert np.all(fx.variances == 0)


def test_noise_validation_errors():
    with pytest.raises(ValueError):
        NoiseModel("banana", np.zeros(2))
    with pytest.raises(ValueError):
        NoiseModel.gaussian_iso([0.0], -1.0)
    with pytest.raises(ValueError):
        NoiseModel.gaussian_diag([0.0, 0.0], [1.0])
    with pytest.raises(ValueError):
        NoiseModel.gaussian_diag([0.0], [-2.0])
    with pytest.raises(ValueError):
        NoiseModel.uniform_component([0.0, 0.0], 5, 0.0, 1.0)
    with pytest.raises(ValueError):
        NoiseModel.uniform_component([0.0], 0, 1.0, 1.0)


def test_noise_mean_is_read_only():
    noise = NoiseModel.fixed([1.0, 2.0])
    with pytest.raises(ValueError):
        noise.mean[0] = 9.0


def test_draw_block_matches_scalar_draws():
    models = [
        NoiseModel.fixed([1.0, 2.0, 3.0]),
        NoiseModel.gaussian_iso([0.0, 0.0, 0.0], 2.0),
        NoiseModel.gaussian_diag([1.0, -1.0, 0.5], [0.1, 0.0, 3.0]),
        NoiseModel.uniform_component([0.0, 2.0, 0.0], 1, -1.0, 4.0),
    ]
    subs = [0, 3, 2**62 + 1]
    for noise in models:
        block = draw_block(noise, 99, subs)
        for i, sub in enumerate(subs):
            one = draw(noise, rng.RngStream(99, sub))
            assert block[i].tobytes() == one.tobytes()


def test_draw_distributions():
    noise = NoiseModel.uniform_component([0.0, 2.0], 0, -1.0, 1.0)
    Y = draw_block(noise, 5, np.arange(40000))
    assert np.all(Y[:, 1] == 2.0)
    assert Y[:, 0].min() >= -1.0 and Y[:, 0].max() < 1.0
    assert abs(Y[:, 0].mean()) < 4.0 / np.sqrt(3.0 * Y.shape[0])

    gauss = NoiseModel.gaussian_diag([1.0, -2.0], [4.0, 0.25])
    Z = draw_block(gauss, 6, np.arange(40000))
    assert abs(Z[:, 0].mean() - 1.0) < 4.0 * 2.0 / np.sqrt(Z.shape[0])
    assert abs(Z[:, 0].std() - 2.0) < 0.05
    assert abs(Z[:, 1].std() - 0.5) < 0.02


def test_optimism_estimate_validation_and_df():
    est = OptimismEstimate(0.5, 0.01, "covariance_mc", replicates=100)
    df = est.to_df(n=10, sigma2=1.25)
    assert df.value == pytest.approx(0.5 * 10 / 2.5)
    assert df.stderr == pytest.approx(0.01 * 10 / 2.5)
    assert df.method == "covariance_mc" and df.replicates == 100
    OptimismEstimate(0.0, 0.0, "stein_mc")  # zero stderr allowed
    with pytest.raises(ValueError):
        OptimismEstimate(0.1, -0.1, "closed_form")
    with pytest.raises(ValueError):
        OptimismEstimate(0.1, 0.1, "guesswork")
    with pytest.raises(ValueError):
        est.to_df(10, 0.0)


def test_training_error():
    assert training_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert training_error([1.0, 3.0], [0.0, 1.0]) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        training_error([1.0], [1.0, 2.0])


def test_df_omega_round_trip():
    for omega in [0.0, 0.3, 2.0]:
        df = df_from_optimism(omega, 7, 0.5)
        assert optimism_from_df(df, 7, 0.5) == pytest.approx(omega)
    assert df_from_optimism(2.0, 4, 1.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        df_from_optimism(1.0, 3, 0.0)
    with pytest.raises(ValueError):
        optimism_from_df(1.0, 3, -1.0)
