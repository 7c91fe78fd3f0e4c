import math

import numpy as np

from errors import DimensionError, UsageError
from tensor import Tensor, activation, affine, conv2d, softplus
from .params import (
    BBBConvParams,
    BBBDenseParams,
    ConvParams,
    DenseParams,
    DropoutConfig,
    VariationalConvParams,
    VariationalDenseParams,
)


def dense_forward(x: Tensor, params: DenseParams, act: str = "identity") -> Tensor:
    return activation(affine(x, params.W, params.b), act)


def conv_forward(x: Tensor, params: ConvParams, act: str = "identity") -> Tensor:
    return activation(conv2d(x, params.K, params.b, params.stride, params.padding), act)


def _reparametrize(m: Tensor, s: Tensor, eps, act_out: str) -> Tensor:
    eps = eps if isinstance(eps, Tensor) else Tensor(eps)
    if eps.shape != m.shape:
        raise DimensionError(f"noise shape {eps.shape} does not match layer output {m.shape}")
    return activation(m + s * eps, act_out)


def variational_dense_forward(x: Tensor, params: VariationalDenseParams, eps) -> Tensor:
    """α_N(α_μ(L(x, μ)) + α_σ(L(x, σ)) ⊙ ε); |s| is the standard deviation of the sample."""
    m = dense_forward(x, params.mu, params.act_mu)
    s = dense_forward(x, params.sigma, params.act_sigma)
    return _reparametrize(m, s, eps, params.act_out)


def variational_conv_forward(x: Tensor, params: VariationalConvParams, eps) -> Tensor:
    m = conv_forward(x, params.mu, params.act_mu)
    s = conv_forward(x, params.sigma, params.act_sigma)
    return _reparametrize(m, s, eps, params.act_out)


def _sample_weight(mean: Tensor, rho: Tensor, z) -> Tensor:
    z = z if isinstance(z, Tensor) else Tensor(z)
    if z.shape != mean.shape:
        raise DimensionError(f"index shape {z.shape} does not match weight {mean.shape}")
    return mean + softplus(rho) * z


def bbb_dense_forward(x: Tensor, params: BBBDenseParams, z_W, z_b) -> Tensor:
    """One weight draw W = μ + softplus(ρ) ⊙ z shared by the whole batch."""
    W = _sample_weight(params.mean.W, params.rho.W, z_W)
    b = _sample_weight(params.mean.b, params.rho.b, z_b)
    return affine(x, W, b)


def bbb_conv_forward(x: Tensor, params: BBBConvParams, z_K, z_b) -> Tensor:
    K = _sample_weight(params.mean.K, params.rho.K, z_K)
    b = _sample_weight(params.mean.b, params.rho.b, z_b)
    return conv2d(x, K, b, params.mean.stride, params.mean.padding)


def bbb_kl_to_prior(params: BBBDenseParams | BBBConvParams) -> Tensor:
    """Closed-form Σ KL(N(μ, σ²) ‖ N(0, prior_std²)) over every weight and bias."""
    p = params.prior_std
    total = None
    for mean, rho in zip(params.mean.parameters(), params.rho.parameters()):
        std = softplus(rho)
        term = (std.square() + mean.square()) / (2.0 * p * p) - std.log() + (math.log(p) - 0.5)
        total = term.sum() if total is None else total + term.sum()
    return total


def dropout_mask(shape, cfg: DropoutConfig, rng: np.random.Generator) -> np.ndarray:
    """Binary keep mask with entries drawn from Bernoulli(1 - p)."""
    if cfg.rate == 0.0:
        return np.ones(shape)
    return (rng.random(shape) >= cfg.rate).astype(np.float64)


def dropout_forward(
    x: Tensor,
    cfg: DropoutConfig,
    rng: np.random.Generator | None = None,
    mask: np.ndarray | None = None,
) -> Tensor:
    """x ⊙ m / (1 - p), active at train and predict time alike."""
    if mask is None:
        if cfg.rate == 0.0:
            return x
        if rng is None:
            raise UsageError("dropout needs either a generator or a fixed mask")
        mask = dropout_mask(x.shape, cfg, rng)
    if mask.shape != x.shape:
        raise DimensionError(f"dropout mask {mask.shape} does not match input {x.shape}")
    return x * Tensor(mask / (1.0 - cfg.rate))
