import logging
from dataclasses import dataclass

import numpy as np

from tensor import RngStream
from .kernel import NNGPConfig, nngp_kernel
from .posterior import gp_posterior

logger = logging.getLogger(__name__)

WIDTH = 8192
N_NETWORKS = 10_000
N_PAIRS = 10
KERNEL_TOLERANCE = 0.05
POSTERIOR_TOLERANCE = 1e-8
PERTURBATION = 1.10


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _gaussian_layer(cov: np.ndarray, units: int, rng: np.random.Generator) -> np.ndarray:
    """[chunk, units, n] pre-activations, every unit ~ N(0, cov[c]) independently."""
    n = cov.shape[-1]
    L = np.linalg.cholesky(cov + 1e-12 * np.eye(n))
    z = rng.standard_normal((cov.shape[0], units, n))
    return np.einsum("cun,cmn->cum", z, L)


def wide_network_covariance(
    X: np.ndarray,
    cfg: NNGPConfig,
    width: int,
    n_networks: int,
    rng: np.random.Generator,
    chunk_elements: int = 4_000_000,
) -> np.ndarray:
    """Empirical output covariance of random ReLU networks of finite width.

    Each layer's pre-activations are drawn from their exact conditional law
    N(0, σ_b² + σ_w²·H Hᵀ / fan_in) given the previous layer's outputs H, which
    is the same distribution an explicit weight draw produces.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    n = len(X)
    base = cfg.bias_variance + cfg.weight_variance * (X @ X.T) / cfg.input_dim
    chunk = max(1, chunk_elements // (width * n))
    second_moment = np.zeros((n, n))
    done = 0
    while done < n_networks:
        c = min(chunk, n_networks - done)
        cov = np.broadcast_to(base, (c, n, n))
        units = width if cfg.depth > 0 else 1
        pre = _gaussian_layer(cov, units, rng)
        for layer in range(cfg.depth):
            post = np.maximum(pre, 0.0)
            cov = cfg.bias_variance + cfg.weight_variance * np.einsum("cwn,cwm->cnm", post, post) / post.shape[1]
            pre = _gaussian_layer(cov, width if layer < cfg.depth - 1 else 1, rng)
        f = pre[:, 0, :]
        second_moment += f.T @ f
        done += c
    return second_moment / n_networks


def check_kernel(
    depth: int,
    stream: RngStream,
    input_dim: int = 4,
    width: int = WIDTH,
    n_networks: int = N_NETWORKS,
    pairs: int = N_PAIRS,
    scale: float = 1.0,
) -> CheckResult:
    rng = stream.generator()
    cfg = NNGPConfig(input_dim, depth=depth)
    worst = 0.0
    for _ in range(pairs):
        x = rng.standard_normal((1, input_dim))
        # correlated partner keeps off-diagonal entries well away from zero
        X = np.vstack([x, 0.8 * x + 0.6 * rng.standard_normal((1, input_dim))])
        expected = scale * nngp_kernel(X, X, cfg)
        empirical = wide_network_covariance(X, cfg, width, n_networks, rng)
        worst = max(worst, float(np.max(np.abs(empirical - expected) / np.abs(expected))))
    return CheckResult(
        f"kernel-depth{depth}",
        worst <= KERNEL_TOLERANCE,
        f"max relative error {worst:.4f} vs wide networks (tolerance {KERNEL_TOLERANCE})",
    )


def check_posterior_exact(stream: RngStream, instances: int = 20) -> CheckResult:
    rng = stream.generator()
    cfg = NNGPConfig(3)
    worst = 0.0
    for _ in range(instances):
        X, y, Xs = rng.standard_normal((5, 3)), rng.standard_normal(5), rng.standard_normal((3, 3))
        noise = 0.1
        post = gp_posterior(X, y, Xs, cfg, noise)
        inv = np.linalg.inv(nngp_kernel(X, X, cfg) + noise * np.eye(5))
        K_s = nngp_kernel(X, Xs, cfg)
        mean = K_s.T @ inv @ y
        cov = nngp_kernel(Xs, Xs, cfg) - K_s.T @ inv @ K_s
        worst = max(worst, float(np.max(np.abs(post.mean - mean))), float(np.max(np.abs(post.covariance - cov))))
    return CheckResult(
        "posterior-exact",
        worst <= POSTERIOR_TOLERANCE,
        f"max deviation from dense inverse {worst:.2e} over {instances} instances",
    )


def check_interpolation(stream: RngStream) -> CheckResult:
    rng = stream.generator()
    cfg = NNGPConfig(3)
    # well separated inputs keep K far from singular, so the 1e-8 jitter barely moves the fit
    X = 2.0 * np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    y = rng.standard_normal(3)
    post = gp_posterior(X, y, X, cfg, 0.0)
    err = float(np.max(np.abs(post.mean - y)))
    return CheckResult("noiseless-interpolation", err <= 1e-6, f"max target error {err:.2e}")


def check_variance_shrinks(stream: RngStream) -> CheckResult:
    rng = stream.generator()
    cfg = NNGPConfig(5)
    X, y, Xs = rng.standard_normal((30, 5)), rng.standard_normal(30), rng.standard_normal((20, 5))
    post = gp_posterior(X, y, Xs, cfg, 0.01)
    excess = float(np.max(post.variance - np.diag(nngp_kernel(Xs, Xs, cfg))))
    return CheckResult("variance-shrinks", excess <= 1e-10, f"max posterior - prior variance {excess:.2e}")


def check_residual(stream: RngStream) -> CheckResult:
    rng = stream.generator()
    cfg = NNGPConfig(10)
    X, y = rng.standard_normal((100, 10)), rng.standard_normal(100)
    noise = 0.01
    post = gp_posterior(X, y, X[:5], cfg, noise)
    K = nngp_kernel(X, X, cfg) + (noise + post.jitter) * np.eye(100)
    residual = float(np.max(np.abs(K @ post.weights - y)))
    return CheckResult("solve-residual", residual <= 1e-8, f"‖(K + noise·I)α - y‖∞ = {residual:.2e}")


def run_gp_checks(
    stream: RngStream,
    perturb_kernel: bool = False,
    width: int = WIDTH,
    n_networks: int = N_NETWORKS,
    pairs: int = N_PAIRS,
) -> list[CheckResult]:
    scale = PERTURBATION if perturb_kernel else 1.0
    results = [
        check_kernel(depth, stream.spawn("kernel", depth), width=width, n_networks=n_networks, pairs=pairs, scale=scale)
        for depth in (1, 2)
    ]
    results.append(check_posterior_exact(stream.spawn("posterior", 0)))
    results.append(check_interpolation(stream.spawn("interpolation", 0)))
    results.append(check_variance_shrinks(stream.spawn("variance", 0)))
    results.append(check_residual(stream.spawn("residual", 0)))
    for r in results:
        logger.info(f"{r.name}: {'PASS' if r.passed else 'FAIL'} ({r.detail})")
    return results
