import math

import numpy as np

import config
from tensor import parameter
from .params import (
    BBBConvParams,
    BBBDenseParams,
    ConvParams,
    DenseParams,
    VariationalConvParams,
    VariationalDenseParams,
)


def he_limit(fan_in: int) -> float:
    # uniform(-l, l) has variance l²/3 = 2 / fan_in
    return math.sqrt(6.0 / fan_in)


def init_dense(in_features: int, out_features: int, rng: np.random.Generator, scale: float = 1.0) -> DenseParams:
    limit = scale * he_limit(in_features)
    W = rng.uniform(-limit, limit, size=(out_features, in_features))
    return DenseParams(parameter(W), parameter(np.zeros(out_features)))


def init_conv(
    in_channels: int,
    filters: int,
    kernel: int,
    stride: int,
    padding: int,
    rng: np.random.Generator,
    scale: float = 1.0,
) -> ConvParams:
    limit = scale * he_limit(in_channels * kernel * kernel)
    K = rng.uniform(-limit, limit, size=(filters, in_channels, kernel, kernel))
    return ConvParams(parameter(K), parameter(np.zeros(filters)), stride, padding)


def init_variational_dense(
    in_features: int, out_features: int, rng: np.random.Generator, act_out: str = "identity"
) -> VariationalDenseParams:
    mu = init_dense(in_features, out_features, rng)
    sigma = init_dense(in_features, out_features, rng, scale=config.SIGMA_INIT_SCALE)
    return VariationalDenseParams(mu, sigma, act_out=act_out)


def init_variational_conv(
    in_channels: int,
    filters: int,
    kernel: int,
    stride: int,
    padding: int,
    rng: np.random.Generator,
    act_out: str = "identity",
) -> VariationalConvParams:
    mu = init_conv(in_channels, filters, kernel, stride, padding, rng)
    sigma = init_conv(in_channels, filters, kernel, stride, padding, rng, scale=config.SIGMA_INIT_SCALE)
    return VariationalConvParams(mu, sigma, act_out=act_out)


def rho_for_std(std: float) -> float:
    """Inverse softplus."""
    return math.log(math.expm1(std))


def _rho_like(params, prior_std: float):
    rho = rho_for_std(config.RHO_INIT_FRACTION * prior_std)
    return [parameter(np.full(p.shape, rho)) for p in params.parameters()]


def init_bbb_dense(in_features: int, out_features: int, rng: np.random.Generator, prior_std: float) -> BBBDenseParams:
    mean = init_dense(in_features, out_features, rng)
    W, b = _rho_like(mean, prior_std)
    return BBBDenseParams(mean, DenseParams(W, b), prior_std)


def init_bbb_conv(
    in_channels: int,
    filters: int,
    kernel: int,
    stride: int,
    padding: int,
    rng: np.random.Generator,
    prior_std: float,
) -> BBBConvParams:
    mean = init_conv(in_channels, filters, kernel, stride, padding, rng)
    K, b = _rho_like(mean, prior_std)
    return BBBConvParams(mean, ConvParams(K, b, stride, padding), prior_std)
