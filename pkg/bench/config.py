from dataclasses import dataclass, field

import config
from errors import ConfigError
from models import Architecture, MethodConfig, TrainingConfig
from models.architecture import dense
from oracle import NNGPConfig


@dataclass(frozen=True)
class BenchConfig:
    """One cell of the (D_x, λ, ε) grid with everything needed to run it."""

    input_dim: int
    data_ratio: int
    noise_std: float
    n_test: int = config.N_TEST
    seeds: tuple[int, ...] = tuple(config.PROFILES["desk"]["seeds"])
    mc_samples: int = config.MC_SAMPLES
    methods: tuple[MethodConfig, ...] = tuple(MethodConfig(m) for m in config.BENCH_METHODS)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    oracle_depth: int = config.NNGP_DEPTH
    weight_variance: float = config.NNGP_WEIGHT_VARIANCE
    bias_variance: float = config.NNGP_BIAS_VARIANCE
    hidden_width: int = config.HIDDEN_WIDTH

    def __post_init__(self):
        if self.input_dim < 1:
            raise ConfigError("bench.input_dims", f"must be >= 1, got {self.input_dim}")
        if self.data_ratio < 1:
            raise ConfigError("bench.data_ratios", f"must be >= 1, got {self.data_ratio}")
        if not self.noise_std > 0:
            raise ConfigError("bench.noise_stds", f"must be > 0, got {self.noise_std}")
        if self.n_test < 1:
            raise ConfigError("bench.n_test", "must be >= 1")
        if not self.seeds:
            raise ConfigError("bench.seeds", "at least one seed is required")
        if self.mc_samples < 1:
            raise ConfigError("bench.mc_samples", "must be >= 1")
        if not self.methods:
            raise ConfigError("bench.methods", "at least one method is required")
        if self.hidden_width < 1:
            raise ConfigError("oracle.hidden_width", "must be >= 1")
        NNGPConfig(self.input_dim, self.oracle_depth, self.weight_variance, self.bias_variance)

    @property
    def train_size(self) -> int:
        return self.input_dim * self.data_ratio

    @property
    def noise_variance(self) -> float:
        return self.noise_std ** 2

    @property
    def config_id(self) -> str:
        return f"D{self.input_dim}-lam{self.data_ratio}-eps{self.noise_std:g}"

    @property
    def oracle(self) -> NNGPConfig:
        return NNGPConfig(self.input_dim, self.oracle_depth, self.weight_variance, self.bias_variance)

    def architecture(self) -> Architecture:
        # same depth and nonlinearity as the kernel recursion
        hidden = tuple(dense(self.hidden_width, "relu") for _ in range(self.oracle_depth))
        return Architecture("regression-mlp", (self.input_dim,), (*hidden, dense(1)))


def build_grid(
    input_dims,
    data_ratios,
    noise_stds,
    **shared,
) -> list[BenchConfig]:
    """Cartesian product in D_x, λ, ε order; every cell shares the remaining settings."""
    return [
        BenchConfig(input_dim=d, data_ratio=lam, noise_std=eps, **shared)
        for d in input_dims
        for lam in data_ratios
        for eps in noise_stds
    ]
