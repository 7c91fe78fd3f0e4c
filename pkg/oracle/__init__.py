from .kernel import NNGPConfig, nngp_kernel
from .posterior import GPPosterior, gp_posterior, gp_prior_sample, jitter_ladder, stable_cholesky
from .check import CheckResult, run_gp_checks, wide_network_covariance

__all__ = [
    "NNGPConfig",
    "nngp_kernel",
    "GPPosterior",
    "gp_posterior",
    "gp_prior_sample",
    "jitter_ladder",
    "stable_cholesky",
    "CheckResult",
    "run_gp_checks",
    "wide_network_covariance",
]
