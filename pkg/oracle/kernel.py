from dataclasses import asdict, dataclass

import numpy as np

import config
from errors import ConfigError, DimensionError


@dataclass(frozen=True)
class NNGPConfig:
    input_dim: int
    depth: int = config.NNGP_DEPTH
    weight_variance: float = config.NNGP_WEIGHT_VARIANCE
    bias_variance: float = config.NNGP_BIAS_VARIANCE

    def __post_init__(self):
        if self.input_dim < 1:
            raise ConfigError("bench.input_dims", "must be >= 1")
        if self.depth < 0:
            raise ConfigError("oracle.depth", "must be >= 0")
        if not 0 < self.weight_variance < np.inf:
            raise ConfigError("oracle.weight_variance", "must be finite and > 0")
        if not 0 <= self.bias_variance < np.inf:
            raise ConfigError("oracle.bias_variance", "must be finite and >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


def _relu_step(k12: np.ndarray, k11: np.ndarray, k22: np.ndarray, cfg: NNGPConfig) -> np.ndarray:
    norm = np.sqrt(np.outer(k11, k22))
    safe = np.where(norm > 0, norm, 1.0)
    cos = np.where(norm > 0, np.clip(k12 / safe, -1.0, 1.0), 1.0)
    theta = np.arccos(cos)
    return cfg.bias_variance + cfg.weight_variance / (2 * np.pi) * norm * (np.sin(theta) + (np.pi - theta) * cos)


def _relu_diag(k: np.ndarray, cfg: NNGPConfig) -> np.ndarray:
    # θ = 0 on the diagonal: sin θ + (π - θ) cos θ = π
    return cfg.bias_variance + cfg.weight_variance / 2 * k


def nngp_kernel(X1: np.ndarray, X2: np.ndarray, cfg: NNGPConfig) -> np.ndarray:
    """Infinite-width ReLU network covariance via the arc-cosine recursion."""
    X1 = np.atleast_2d(np.asarray(X1, dtype=np.float64))
    X2 = np.atleast_2d(np.asarray(X2, dtype=np.float64))
    if X1.shape[1] != cfg.input_dim or X2.shape[1] != cfg.input_dim:
        raise DimensionError(f"kernel inputs {X1.shape}, {X2.shape} do not have {cfg.input_dim} columns")

    scale = cfg.weight_variance / cfg.input_dim
    k12 = cfg.bias_variance + scale * (X1 @ X2.T)
    k11 = cfg.bias_variance + scale * np.einsum("ij,ij->i", X1, X1)
    k22 = cfg.bias_variance + scale * np.einsum("ij,ij->i", X2, X2)
    for _ in range(cfg.depth):
        k12 = _relu_step(k12, k11, k22, cfg)
        k11, k22 = _relu_diag(k11, cfg), _relu_diag(k22, cfg)
    return k12
