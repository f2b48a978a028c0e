import numpy as np
import pytest

from optimism.core import DesignMatrix, NoiseModel, draw_block
from optimism.estimators import (
    EstimatorError,
    FitterHandle,
    McConfig,
    default_batches,
    diag_derivatives_rows,
    finite_difference_divergence,
    mc_errors,
    mc_optimism_covariance,
    mc_optimism_stein,
    per_coordinate_derivatives,
    per_coordinate_dominance,
)
from optimism.projections import project_ball, project_finite_set
from optimism.smoothers import RidgeSpec, ridge_fit, smoother_matrix, trace_df

IDENTITY = FitterHandle(fit=lambda y: y, fit_batch=lambda Y: Y,
                        name="identity")


def _ridge_handle(seed=101, n=20, p=4, lam=1.0):
    rng = np.random.default_rng(seed)
    X = DesignMatrix(rng.normal(size=(n, p)))
    spec = RidgeSpec(X, lam)
    df = trace_df(smoother_matrix(spec))
    return FitterHandle(
        fit=lambda y: ridge_fit(spec, y),
        fit_batch=lambda Y: ridge_fit(spec, Y),
        analytic_divergence_batch=lambda Y: np.full(Y.shape[0], df),
        name="ridge",
    ), spec, df


def test_covariance_recovers_two_sigma2_for_identity():
    sigma2 = 0.7
    noise = NoiseModel.gaussian_iso(np.zeros(10), sigma2)
    cfg = McConfig(replicates=20000, batches=50, seed=5)
    est = mc_optimism_covariance(IDENTITY, noise, cfg)
    assert est.method == "covariance_mc" and est.replicates == 20000
    assert est.stderr > 0.0
    assert abs(est.value - 2.0 * sigma2) <= 4.0 * est.stderr


def test_covariance_is_exactly_zero_for_constant_fitter():
    noise = NoiseModel.gaussian_iso(np.ones(6), 1.0)
    const = FitterHandle(fit=lambda y: np.zeros_like(y),
                         fit_batch=lambda Y: np.zeros_like(Y))
    est = mc_optimism_covariance(const, noise, McConfig(replicates=100,
                                                        batches=10, seed=6))
    assert est.value == 0.0 and est.stderr == 0.0


def test_stein_is_exact_for_linear_smoother_divergence():
    handle, spec, df = _ridge_handle()
    sigma2 = 0.5
    noise = NoiseModel.gaussian_iso(np.zeros(spec.X.n), sigma2)
    est = mc_optimism_stein(handle, noise, sigma2,
                            McConfig(replicates=100, batches=10, seed=7))
    assert est.method == "stein_mc"
    assert est.value == pytest.approx(2.0 * sigma2 / spec.X.n * df, abs=1e-13)
    assert est.stderr == 0.0


def test_stein_rejects_non_gaussian_noise():
    noise = NoiseModel.uniform_component(np.zeros(4), 1, 0.0, 1.0)
    with pytest.raises(EstimatorError):
        mc_optimism_stein(IDENTITY, noise, 1.0,
                          McConfig(replicates=10, batches=5, seed=8))


def test_finite_difference_divergence_of_identity_is_n():
    y = np.array([0.3, -2.0, 5.0, 0.0])
    assert finite_difference_divergence(IDENTITY, y, 1e-5) == 4.0


def test_finite_difference_matches_smoother_trace():
    handle, spec, df = _ridge_handle()
    fd_handle = FitterHandle(fit=handle.fit, fit_batch=handle.fit_batch)
    rng = np.random.default_rng(9)
    y = rng.normal(size=spec.X.n)
    assert abs(finite_difference_divergence(fd_handle, y, 1e-5) - df) <= 1e-7


def test_ball_projection_divergence_at_a_known_point():
    ball = FitterHandle(fit=lambda y: project_ball(y, 1.0),
                        fit_batch=lambda Y: project_ball(Y, 1.0))
    # at y = (0, 2): radial direction is flat, tangent shrinks by r/|y|
    d = per_coordinate_derivatives(ball, np.array([0.0, 2.0]), 1e-6)
    np.testing.assert_allclose(d, [0.5, 0.0], atol=1e-6)
    assert abs(finite_difference_divergence(ball, np.array([0.0, 2.0]), 1e-6)
               - 0.5) <= 1e-6


def test_per_coordinate_dominance_true_and_false_cases():
    assert per_coordinate_dominance(IDENTITY, IDENTITY,
                                    np.array([0.4, -1.0]), 1e-5)
    ball = FitterHandle(fit=lambda y: project_ball(y, 0.5),
                        fit_batch=lambda Y: project_ball(Y, 0.5))
    rng = np.random.default_rng(10)
    for _ in range(20):
        assert per_coordinate_dominance(ball, IDENTITY,
                                        rng.normal(size=2), 1e-5)
    # a non-convex set can react to a perturbation faster than the identity
    pts = np.array([[1.0, 0.0], [-1.0, 0.0]])
    jumpy = FitterHandle(fit=lambda y: project_finite_set(y, pts),
                         fit_batch=lambda Y: project_finite_set(Y, pts))
    assert not per_coordinate_dominance(jumpy, IDENTITY,
                                        np.array([1e-5, 0.5]), 1e-4)


def test_diag_derivatives_rows_matches_single_points():
    handle, spec, _ = _ridge_handle()
    rng = np.random.default_rng(11)
    Ys = rng.normal(size=(5, spec.X.n))
    stacked = diag_derivatives_rows(handle, Ys, 1e-5)
    single = np.array([per_coordinate_derivatives(handle, y, 1e-5)
                       for y in Ys])
    assert stacked.shape == (5, spec.X.n)
    assert np.max(np.abs(stacked - single)) <= 1e-9
    with pytest.raises(ValueError):
        diag_derivatives_rows(handle, Ys, 0.0)
    with pytest.raises(ValueError):
        per_coordinate_derivatives(handle, Ys[0], -1e-5)


def test_mc_errors_identity_and_optimism_consistency():
    sigma2 = 0.5
    noise = NoiseModel.gaussian_iso(np.zeros(8), sigma2)
    cfg = McConfig(replicates=4000, batches=40, seed=12)
    err = mc_errors(IDENTITY, noise, cfg)
    assert err.train == 0.0 and err.train_se == 0.0
    assert abs(err.pred - 2.0 * sigma2) <= 4.0 * err.pred_se

    handle, spec, _ = _ridge_handle()
    noise = NoiseModel.gaussian_iso(np.zeros(spec.X.n), sigma2)
    cfg = McConfig(replicates=4000, batches=40, seed=13)
    err = mc_errors(handle, noise, cfg)
    omega = mc_optimism_covariance(handle, noise, cfg)
    gap_se = np.sqrt(err.pred_se**2 + err.train_se**2 + omega.stderr**2)
    assert abs((err.pred - err.train) - omega.value) <= 4.0 * gap_se


def test_results_do_not_depend_on_thread_count():
    handle, spec, _ = _ridge_handle()
    noise = NoiseModel.gaussian_iso(np.zeros(spec.X.n), 1.0)
    runs = []
    for threads in (1, 2, 3):
        cfg = McConfig(replicates=120, batches=40, seed=14, threads=threads)
        cov = mc_optimism_covariance(handle, noise, cfg)
        stein = mc_optimism_stein(handle, noise, 1.0, cfg)
        err = mc_errors(handle, noise, cfg)
        runs.append((cov.value, cov.stderr, stein.value, stein.stderr,
                     err.train, err.train_se, err.pred, err.pred_se))
    assert runs[0] == runs[1] == runs[2]


def test_mcconfig_validation():
    with pytest.raises(ValueError):
        McConfig(replicates=1)
    with pytest.raises(ValueError):
        McConfig(replicates=10, batches=1)
    with pytest.raises(ValueError):
        McConfig(replicates=10, batches=11)
    with pytest.raises(ValueError):
        McConfig(replicates=10, batches=3)
    with pytest.raises(ValueError):
        McConfig(replicates=10, batches=5, fd_epsilon=0.0)
    with pytest.raises(ValueError):
        McConfig(replicates=10, batches=5, threads=0)
    noise = NoiseModel.gaussian_iso(np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        # one replicate per batch leaves no within-batch covariance
        mc_optimism_covariance(IDENTITY, noise,
                               McConfig(replicates=10, batches=10))


def test_default_batches():
    assert default_batches(5000) == 50
    assert default_batches(60) == 30
    assert default_batches(120) == 40
    assert default_batches(40) == 20   # never one replicate per batch ...
    assert default_batches(4) == 2
    assert default_batches(13) == 13   # ... except for primes
    with pytest.raises(ValueError):
        default_batches(1)


def test_estimator_error_names_the_failing_replicate():
    noise = NoiseModel.gaussian_iso(np.zeros(5), 1.0)
    cfg = McConfig(replicates=120, batches=40, seed=15)
    Y = draw_block(noise, cfg.seed, np.arange(cfg.replicates))
    col = np.sort(Y[:, 0])
    cut = 0.5 * (col[-1] + col[-2])
    target = int(np.argmax(Y[:, 0]))

    def fragile(Z):
        if np.any(Z[:, 0] > cut):
            raise RuntimeError("synthetic breakdown")
        return Z

    handle = FitterHandle(fit=lambda y: fragile(y[None, :])[0],
                          fit_batch=fragile, name="fragile")
    with pytest.raises(EstimatorError, match=f"replicate {target}"):
        mc_optimism_covariance(handle, noise, cfg)


def test_fit_rows_falls_back_to_scalar_fit():
    handle = FitterHandle(fit=lambda y: 2.0 * y)
    Y = np.arange(6.0).reshape(2, 3)
    assert np.array_equal(handle.fit_rows(Y), 2.0 * Y)
