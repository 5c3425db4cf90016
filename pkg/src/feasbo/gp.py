"""Exact Gaussian process regression for constraint surrogates.

One independent GP per constraint output. Squared-exponential ARD kernel,
constant prior mean fixed to the training-output mean, hyperparameters
found by multi-start L-BFGS-B on the log marginal likelihood. Inputs are
scaled to the unit box and outputs standardized during the search, but
fitted parameters are stored in raw units and all prediction happens in
raw units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator

from .validation import as_float_array, check_bounds, check_matrix, check_vector, readonly


class GpError(Exception):
    """Base class for GP fitting and prediction failures."""


class InsufficientDataError(GpError):
    pass


class IllConditionedKernelError(GpError):
    """Cholesky factorization failed even at the maximum jitter level."""

    def __init__(self, message: str, params: Optional["KernelParams"] = None,
                 max_jitter: float = float("nan")):
        super().__init__(message)
        self.params = params
        self.max_jitter = max_jitter


@dataclass(frozen=True)
class KernelParams:
    """SE-ARD kernel hyperparameters in raw (unscaled) units."""

    lengthscales: np.ndarray
    signal_variance: float
    noise_variance: float

    def __post_init__(self):
        ls = as_float_array(self.lengthscales, "lengthscales", ndim=1)
        if np.any(ls <= 0.0):
            raise ValueError("lengthscales must be positive")
        if not self.signal_variance > 0.0:
            raise ValueError("signal_variance must be positive")
        if self.noise_variance < 0.0:
            raise ValueError("noise_variance must be non-negative")
        object.__setattr__(self, "lengthscales", readonly(ls))
        object.__setattr__(self, "signal_variance", float(self.signal_variance))
        object.__setattr__(self, "noise_variance", float(self.noise_variance))

    def to_dict(self) -> dict:
        return {
            "lengthscales": [float(v) for v in self.lengthscales],
            "signal_variance": self.signal_variance,
            "noise_variance": self.noise_variance,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "KernelParams":
        return cls(
            lengthscales=np.asarray(payload["lengthscales"], dtype=float),
            signal_variance=float(payload["signal_variance"]),
            noise_variance=float(payload["noise_variance"]),
        )


@dataclass(frozen=True)
class PosteriorPrediction:
    mean: float
    variance: float


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameter-search settings.

    Bounds apply in normalized space: inputs scaled to [0, 1] per dimension,
    outputs standardized to unit variance. ``noise_variance`` is the fixed
    observation noise in raw output units; set ``optimize_noise`` to learn it
    instead. ``input_bounds`` holds the raw domain box used for input scaling;
    when omitted, the box is taken from the training data.
    """

    lengthscale_bounds: Tuple[float, float] = (1e-2, 1e2)
    signal_bounds: Tuple[float, float] = (1e-3, 1e3)
    noise_variance: float = 0.0
    optimize_noise: bool = False
    noise_bounds: Tuple[float, float] = (1e-6, 1.0)
    restarts: int = 8
    seed: int = 0
    maxiter: int = 100
    jitter: float = 1e-8
    max_jitter: float = 1e-2
    variance_floor: float = 1e-12
    input_bounds: Optional[np.ndarray] = None


def ard_sq_exp(a: np.ndarray, b: np.ndarray, lengthscales: np.ndarray,
               signal_variance: float) -> np.ndarray:
    """Squared-exponential kernel matrix with per-dimension lengthscales."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    ls = np.asarray(lengthscales, dtype=float)
    d2 = cdist(a / ls, b / ls, metric="sqeuclidean")
    return signal_variance * np.exp(-0.5 * d2)


def _chol_with_jitter(k_core: np.ndarray, noise_variance: float, signal_variance: float,
                      jitter: float, max_jitter: float,
                      params_for_error: Optional[KernelParams] = None):
    """Cholesky of k_core + noise*I, escalating jitter (relative to the signal
    variance) by factors of 10 until the factorization succeeds.

    Returns (lower_factor, jitter_level_used)."""
    n = k_core.shape[0]
    eye = np.eye(n)
    level = jitter
    while True:
        try:
            mat = k_core + (noise_variance + level * signal_variance) * eye
            lower = cholesky(mat, lower=True, check_finite=False)
            return lower, level
        except np.linalg.LinAlgError:
            pass
        if level >= max_jitter:
            raise IllConditionedKernelError(
                "ill-conditioned kernel: Cholesky factorization failed at jitter "
                f"{level:g} (max {max_jitter:g}); params={params_for_error}",
                params=params_for_error, max_jitter=max_jitter)
        level = min(level * 10.0, max_jitter)


def _lml_scaled(theta: np.ndarray, xs: np.ndarray, ys: np.ndarray, sq_diffs: list,
                fixed_noise_s: float, optimize_noise: bool, jitter: float,
                max_jitter: float):
    """Negative log marginal likelihood and gradient in log-parameter space.

    theta = log([lengthscales..., signal_variance] (+ [noise_variance])),
    all in the normalized data space.
    """
    n, d = xs.shape
    ls = np.exp(theta[:d])
    sf2 = np.exp(theta[d])
    sn2 = np.exp(theta[d + 1]) if optimize_noise else fixed_noise_s

    d2 = cdist(xs / ls, xs / ls, metric="sqeuclidean")
    k_se = sf2 * np.exp(-0.5 * d2)
    try:
        lower, level = _chol_with_jitter(k_se, sn2, sf2, jitter, max_jitter)
    except IllConditionedKernelError:
        bad = np.zeros_like(theta)
        return 1e25, bad

    alpha = cho_solve((lower, True), ys, check_finite=False)
    lml = (-0.5 * float(ys @ alpha)
           - float(np.sum(np.log(np.diag(lower))))
           - 0.5 * n * math.log(2.0 * math.pi))

    k_inv = cho_solve((lower, True), np.eye(n), check_finite=False)
    inner = np.outer(alpha, alpha) - k_inv  # 0.5*trace(inner @ dK) per parameter

    grad = np.empty_like(theta)
    for j in range(d):
        w = sq_diffs[j] / (ls[j] ** 2)
        grad[j] = 0.5 * float(np.sum(inner * (k_se * w)))
    # jitter scales with the signal variance, so it enters this derivative too
    dk_dsf = k_se + (level * sf2) * np.eye(n)
    grad[d] = 0.5 * float(np.sum(inner * dk_dsf))
    if optimize_noise:
        grad[d + 1] = 0.5 * sn2 * float(np.trace(inner))
    return -lml, -grad


class ConstraintGP(BaseEstimator):
    """Exact GP regressor for a single constraint function.

    Parameters mirror FitConfig; bounds are interpreted in the normalized
    space (unit input box, standardized outputs). Fitted state is stored in
    raw units: ``params_``, ``prior_mean_``, ``X_train_``, ``alpha_`` and the
    lower Cholesky factor ``L_`` of the raw-space Gram matrix.
    """

    def __init__(self, input_bounds=None, lengthscale_bounds=(1e-2, 1e2),
                 signal_bounds=(1e-3, 1e3), noise_variance=0.0,
                 optimize_noise=False, noise_bounds=(1e-6, 1.0), restarts=8,
                 seed=0, maxiter=100, jitter=1e-8, max_jitter=1e-2,
                 variance_floor=1e-12):
        self.input_bounds = input_bounds
        self.lengthscale_bounds = lengthscale_bounds
        self.signal_bounds = signal_bounds
        self.noise_variance = noise_variance
        self.optimize_noise = optimize_noise
        self.noise_bounds = noise_bounds
        self.restarts = restarts
        self.seed = seed
        self.maxiter = maxiter
        self.jitter = jitter
        self.max_jitter = max_jitter
        self.variance_floor = variance_floor

    @classmethod
    def from_config(cls, config: FitConfig, input_bounds=None) -> "ConstraintGP":
        if input_bounds is None:
            input_bounds = config.input_bounds
        return cls(input_bounds=input_bounds,
                   lengthscale_bounds=config.lengthscale_bounds,
                   signal_bounds=config.signal_bounds,
                   noise_variance=config.noise_variance,
                   optimize_noise=config.optimize_noise,
                   noise_bounds=config.noise_bounds,
                   restarts=config.restarts,
                   seed=config.seed,
                   maxiter=config.maxiter,
                   jitter=config.jitter,
                   max_jitter=config.max_jitter,
                   variance_floor=config.variance_floor)

    @classmethod
    def from_fixed_params(cls, X, y, params: KernelParams,
                          prior_mean: Optional[float] = None,
                          **kwargs) -> "ConstraintGP":
        """Model over (X, y) with given raw-unit hyperparameters, no fitting.

        prior_mean defaults to the mean of y."""
        model = cls(**kwargs)
        x = check_matrix(X, "X")
        yv = check_vector(y, "y")
        if x.shape[0] != yv.shape[0]:
            raise ValueError(
                f"dimension mismatch: X has {x.shape[0]} rows, y has {yv.shape[0]} entries")
        if x.shape[0] < 1:
            raise InsufficientDataError("insufficient data: need at least 1 point")
        mean = float(np.mean(yv)) if prior_mean is None else float(prior_mean)
        model._set_state(params, mean, x, yv, model._resolve_bounds(x))
        return model

    # -- fitting ---------------------------------------------------------

    def _resolve_bounds(self, x: np.ndarray) -> np.ndarray:
        if self.input_bounds is not None:
            bounds = check_bounds(np.asarray(self.input_bounds, dtype=float), "input_bounds")
            if bounds.shape[0] != x.shape[1]:
                raise ValueError(
                    f"dimension mismatch: input_bounds has {bounds.shape[0]} rows, "
                    f"data has {x.shape[1]} columns")
            return bounds
        lo = x.min(axis=0)
        hi = x.max(axis=0)
        width = hi - lo
        hi = np.where(width <= 0.0, lo + 1.0, hi)
        return np.column_stack([lo, hi])

    def fit(self, X, y, warm_start_params: Optional[KernelParams] = None) -> "ConstraintGP":
        x = check_matrix(X, "X")
        yv = check_vector(y, "y")
        if x.shape[0] != yv.shape[0]:
            raise ValueError(
                f"dimension mismatch: X has {x.shape[0]} rows, y has {yv.shape[0]} entries")
        if x.shape[0] < 2:
            raise InsufficientDataError(
                f"insufficient data: need at least 2 points, got {x.shape[0]}")

        bounds = self._resolve_bounds(x)
        widths = bounds[:, 1] - bounds[:, 0]
        xs = (x - bounds[:, 0]) / widths

        y_mean = float(yv.mean())
        y_std = float(yv.std())
        if y_std < 1e-12:
            y_std = 1.0
        ys = (yv - y_mean) / y_std

        n, d = xs.shape
        fixed_noise_s = float(self.noise_variance) / (y_std ** 2)
        sq_diffs = [(xs[:, j, None] - xs[None, :, j]) ** 2 for j in range(d)]

        log_ls_bounds = (math.log(self.lengthscale_bounds[0]), math.log(self.lengthscale_bounds[1]))
        log_sf_bounds = (math.log(self.signal_bounds[0]), math.log(self.signal_bounds[1]))
        opt_bounds = [log_ls_bounds] * d + [log_sf_bounds]
        if self.optimize_noise:
            opt_bounds.append((math.log(self.noise_bounds[0]), math.log(self.noise_bounds[1])))

        starts = self._build_starts(d, warm_start_params, widths, y_std, opt_bounds)

        best_theta = None
        best_nll = np.inf
        for theta0 in starts:
            result = minimize(
                _lml_scaled, theta0, jac=True, method="L-BFGS-B", bounds=opt_bounds,
                args=(xs, ys, sq_diffs, fixed_noise_s, self.optimize_noise,
                      self.jitter, self.max_jitter),
                options={"maxiter": self.maxiter})
            if result.fun < best_nll:
                best_nll = float(result.fun)
                best_theta = np.asarray(result.x, dtype=float)
        if best_theta is None or not np.isfinite(best_nll):
            raise IllConditionedKernelError(
                "ill-conditioned kernel: no hyperparameter start produced a "
                "factorizable Gram matrix")

        ls_s = np.exp(best_theta[:d])
        sf2_s = float(np.exp(best_theta[d]))
        sn2_s = float(np.exp(best_theta[d + 1])) if self.optimize_noise else fixed_noise_s

        params = KernelParams(
            lengthscales=ls_s * widths,
            signal_variance=sf2_s * y_std ** 2,
            noise_variance=sn2_s * y_std ** 2,
        )
        self._set_state(params, y_mean, x, yv, bounds)
        return self

    def _build_starts(self, d: int, warm: Optional[KernelParams], widths: np.ndarray,
                      y_std: float, opt_bounds: Sequence[Tuple[float, float]]):
        lo = np.array([b[0] for b in opt_bounds])
        hi = np.array([b[1] for b in opt_bounds])
        if warm is not None:
            first = [math.log(v) for v in np.asarray(warm.lengthscales) / widths]
            first.append(math.log(warm.signal_variance / y_std ** 2))
            if self.optimize_noise:
                sn = max(warm.noise_variance / y_std ** 2, self.noise_bounds[0])
                first.append(math.log(sn))
            first = np.clip(np.asarray(first, dtype=float), lo, hi)
        else:
            first = [math.log(0.5)] * d + [0.0]
            if self.optimize_noise:
                first.append(math.log(1e-2))
            first = np.clip(np.asarray(first, dtype=float), lo, hi)

        rng = np.random.default_rng(self.seed)
        n_random = max(int(self.restarts) - 1, 0)
        randoms = lo + (hi - lo) * rng.random((n_random, lo.size))
        return [first] + [randoms[i] for i in range(n_random)]

    def _set_state(self, params: KernelParams, prior_mean: float, x: np.ndarray,
                   yv: np.ndarray, bounds: np.ndarray) -> None:
        k_core = ard_sq_exp(x, x, params.lengthscales, params.signal_variance)
        lower, level = _chol_with_jitter(
            k_core, params.noise_variance, params.signal_variance,
            self.jitter, self.max_jitter, params_for_error=params)
        resid = yv - prior_mean
        alpha = cho_solve((lower, True), resid, check_finite=False)

        self.params_ = params
        self.prior_mean_ = float(prior_mean)
        self.X_train_ = readonly(np.array(x, dtype=float))
        self.y_train_ = readonly(np.array(yv, dtype=float))
        self.input_bounds_ = readonly(np.array(bounds, dtype=float))
        self.L_ = readonly(lower)
        self.alpha_ = readonly(alpha)
        self.jitter_level_ = float(level)
        self.n_dims_ = int(x.shape[1])

    # -- conditioning ----------------------------------------------------

    def condition(self, X, y) -> "ConstraintGP":
        """New model over (X, y) with this model's hyperparameters and prior
        mean frozen; only the factorization is recomputed."""
        self._require_fitted()
        x = check_matrix(X, "X", n_cols=self.n_dims_)
        yv = check_vector(y, "y")
        if x.shape[0] != yv.shape[0]:
            raise ValueError(
                f"dimension mismatch: X has {x.shape[0]} rows, y has {yv.shape[0]} entries")
        if x.shape[0] < 1:
            raise InsufficientDataError("insufficient data: need at least 1 point to condition")
        other = ConstraintGP(**self.get_params())
        other._set_state(self.params_, self.prior_mean_, x, yv, np.array(self.input_bounds_))
        return other

    # -- prediction ------------------------------------------------------

    def _require_fitted(self) -> None:
        if not hasattr(self, "params_"):
            raise GpError("model is not fitted")

    def _posterior(self, X):
        """Posterior mean and unclamped latent variance at query rows."""
        self._require_fitted()
        x = np.asarray(X, dtype=float)
        single = x.ndim == 1
        x = check_matrix(np.atleast_2d(x), "query", n_cols=self.n_dims_)
        p = self.params_
        k_star = ard_sq_exp(x, self.X_train_, p.lengthscales, p.signal_variance)
        mean = self.prior_mean_ + k_star @ self.alpha_
        v = solve_triangular(self.L_, k_star.T, lower=True, check_finite=False)
        var = p.signal_variance - np.einsum("ij,ij->j", v, v)
        if single:
            return float(mean[0]), float(var[0])
        return mean, var

    def predict(self, X, return_var: bool = False, include_noise: bool = False):
        mean, var = self._posterior(X)
        if not return_var:
            return mean
        var = np.maximum(var, self.variance_floor)
        if include_noise:
            var = var + self.params_.noise_variance
        return mean, var

    def log_marginal_likelihood(self, params: Optional[KernelParams] = None) -> float:
        """Raw-space log marginal likelihood of the training data, under
        ``params`` if given, else the fitted hyperparameters."""
        self._require_fitted()
        if params is None:
            params = self.params_
        return _lml_raw(self.X_train_, self.y_train_, params, self.prior_mean_,
                        self.jitter, self.max_jitter)


def _lml_raw(x: np.ndarray, yv: np.ndarray, params: KernelParams, prior_mean: float,
             jitter: float, max_jitter: float) -> float:
    k_core = ard_sq_exp(x, x, params.lengthscales, params.signal_variance)
    lower, _ = _chol_with_jitter(k_core, params.noise_variance, params.signal_variance,
                                 jitter, max_jitter, params_for_error=params)
    resid = yv - prior_mean
    alpha = cho_solve((lower, True), resid, check_finite=False)
    n = x.shape[0]
    return (-0.5 * float(resid @ alpha)
            - float(np.sum(np.log(np.diag(lower))))
            - 0.5 * n * math.log(2.0 * math.pi))


# -- dataset-level functional surface ------------------------------------

def fit(dataset, constraint_index: int, fit_config: Optional[FitConfig] = None,
        warm_start_params: Optional[KernelParams] = None) -> ConstraintGP:
    """Train a GP on one constraint column of a dataset."""
    config = fit_config if fit_config is not None else FitConfig()
    model = ConstraintGP.from_config(config)
    return model.fit(dataset.inputs, dataset.column(constraint_index),
                     warm_start_params=warm_start_params)


def predict(model: ConstraintGP, query) -> PosteriorPrediction:
    """Posterior at a single query point, variance clamped to the floor."""
    q = as_float_array(query, "query", ndim=1)
    mean, var = model.predict(q, return_var=True)
    return PosteriorPrediction(mean=float(mean), variance=float(var))


def log_marginal_likelihood(dataset, constraint_index: int, params: KernelParams) -> float:
    """Log marginal likelihood of one constraint column under given raw-unit
    hyperparameters, with the constant prior mean set to the output mean."""
    x = dataset.inputs
    yv = dataset.column(constraint_index)
    if x.shape[0] < 2:
        raise InsufficientDataError(
            f"insufficient data: need at least 2 points, got {x.shape[0]}")
    defaults = FitConfig()
    return _lml_raw(x, yv, params, float(yv.mean()), defaults.jitter, defaults.max_jitter)
