from dataclasses import dataclass, field

import numpy as np

import config
from errors import DomainError, UsageError
from models import Model, predictive_moments
from oracle import GPPosterior


@dataclass
class KLResult:
    method_id: str
    config_id: str
    seed: int
    mean_kl: float
    per_point_kl: np.ndarray = field(repr=False)


def kl_univariate_gaussian(mu1, var1, mu2, var2):
    """KL(N(mu1, var1) ‖ N(mu2, var2)); broadcasts over arrays."""
    var1 = np.asarray(var1, dtype=np.float64)
    var2 = np.asarray(var2, dtype=np.float64)
    if np.any(var1 <= 0) or np.any(var2 <= 0):
        raise DomainError("variances must be > 0")
    diff = np.asarray(mu1, dtype=np.float64) - np.asarray(mu2, dtype=np.float64)
    kl = 0.5 * (np.log(var2 / var1) + (var1 + diff ** 2) / var2 - 1.0)
    # rounding can leave -1e-17 on identical inputs
    kl = np.maximum(kl, 0.0)
    return float(kl) if kl.ndim == 0 else kl


def evaluate_uncertainty_quality(
    model: Model,
    oracle: GPPosterior,
    X_test: np.ndarray,
    T_mc: int = config.MC_SAMPLES,
    rng: np.random.Generator | None = None,
    config_id: str = "",
    seed: int = 0,
) -> KLResult:
    """Per-point KL(N(μ_GP, k_GP + ε²) ‖ N(mean_B, var_B + ε²)), averaged over X_test."""
    X_test = np.atleast_2d(np.asarray(X_test, dtype=np.float64))
    if len(oracle.mean) != len(X_test):
        raise UsageError(f"oracle covers {len(oracle.mean)} points but X_test has {len(X_test)}")
    summary = predictive_moments(model, X_test, T_mc, rng)
    if summary.mean.size != len(X_test):
        raise UsageError(f"model must emit one output per test point, got {summary.mean.shape}")

    noise = oracle.noise_variance
    model_var = np.maximum(summary.variance.reshape(-1), config.VARIANCE_FLOOR) + noise
    oracle_var = np.maximum(oracle.variance, config.VARIANCE_FLOOR) + noise
    kl = kl_univariate_gaussian(oracle.mean, oracle_var, summary.mean.reshape(-1), model_var)
    return KLResult(model.method.method_id, config_id, seed, float(np.mean(kl)), kl)
