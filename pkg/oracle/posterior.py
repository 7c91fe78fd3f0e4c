import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular

import config
from errors import DomainError, NumericalError, UsageError
from .kernel import NNGPConfig, nngp_kernel

logger = logging.getLogger(__name__)


@dataclass
class GPPosterior:
    mean: np.ndarray
    covariance: np.ndarray
    noise_variance: float
    weights: np.ndarray
    jitter: float = 0.0
    log_marginal_likelihood: float = 0.0

    @property
    def variance(self) -> np.ndarray:
        return np.diag(self.covariance).copy()


def jitter_ladder(noise_variance: float) -> list[float]:
    steps = [] if noise_variance <= 0 else [0.0]
    jitter = config.JITTER_START
    while jitter <= config.JITTER_MAX * (1 + 1e-9):
        steps.append(jitter)
        jitter *= 10
    return steps


def stable_cholesky(K: np.ndarray, noise_variance: float = 0.0) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of K + (noise + jitter)·I, escalating jitter up to JITTER_MAX."""
    eye = np.eye(K.shape[0])
    for jitter in jitter_ladder(noise_variance):
        try:
            L = cholesky(K + (noise_variance + jitter) * eye, lower=True)
        except LinAlgError:
            logger.warning(f"Cholesky failed with jitter {jitter:g}, escalating")
            continue
        return L, jitter
    raise NumericalError(f"kernel matrix not positive definite even with jitter {config.JITTER_MAX:g}")


def gp_posterior(
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_test: np.ndarray,
    cfg: NNGPConfig,
    noise_variance: float,
) -> GPPosterior:
    """Exact posterior N(μ_GP, k_GP) of the latent function at X_test."""
    if noise_variance < 0:
        raise DomainError(f"noise variance must be >= 0, got {noise_variance}")
    X_test = np.atleast_2d(np.asarray(X_test, dtype=np.float64))
    K_ss = nngp_kernel(X_test, X_test, cfg)
    y_train = np.asarray(y_train, dtype=np.float64).reshape(-1)
    if len(y_train) == 0:
        return GPPosterior(np.zeros(len(X_test)), K_ss, noise_variance, np.zeros(0))

    X_train = np.atleast_2d(np.asarray(X_train, dtype=np.float64))
    if len(X_train) != len(y_train):
        raise UsageError(f"{len(X_train)} training inputs but {len(y_train)} targets")
    L, jitter = stable_cholesky(nngp_kernel(X_train, X_train, cfg), noise_variance)
    alpha = cho_solve((L, True), y_train)
    K_s = nngp_kernel(X_train, X_test, cfg)
    v = solve_triangular(L, K_s, lower=True)
    cov = K_ss - v.T @ v
    lml = -0.5 * y_train @ alpha - np.log(np.diag(L)).sum() - 0.5 * len(y_train) * math.log(2 * math.pi)
    return GPPosterior(K_s.T @ alpha, 0.5 * (cov + cov.T), noise_variance, alpha, jitter, float(lml))


def gp_prior_sample(
    X: np.ndarray,
    cfg: NNGPConfig,
    noise_variance: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """y = f + noise, f ~ N(0, K(X, X)) through the jittered Cholesky factor."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(X) < 1:
        raise UsageError("need at least one input to sample the prior")
    if noise_variance < 0:
        raise DomainError(f"noise variance must be >= 0, got {noise_variance}")
    L, _ = stable_cholesky(nngp_kernel(X, X, cfg))
    f = L @ rng.standard_normal(len(X))
    if noise_variance == 0:
        return f
    return f + math.sqrt(noise_variance) * rng.standard_normal(len(X))
