from dataclasses import dataclass

from errors import ConfigError, DimensionError
from tensor import Tensor


@dataclass
class DenseParams:
    W: Tensor
    b: Tensor

    def __post_init__(self):
        if self.W.data.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise DimensionError(f"dense params: W {self.W.shape} and b {self.b.shape} disagree")

    @property
    def out_features(self) -> int:
        return self.W.shape[0]

    def parameters(self) -> list[Tensor]:
        return [self.W, self.b]


@dataclass
class ConvParams:
    K: Tensor
    b: Tensor
    stride: int = 1
    padding: int = 0

    def __post_init__(self):
        if self.K.data.ndim != 4 or self.b.shape != (self.K.shape[0],):
            raise DimensionError(f"conv params: K {self.K.shape} and b {self.b.shape} disagree")

    def parameters(self) -> list[Tensor]:
        return [self.K, self.b]


def _same_shapes(a, b, what: str):
    if [p.shape for p in a.parameters()] != [p.shape for p in b.parameters()]:
        raise DimensionError(f"{what}: sub-layer shapes differ")


@dataclass
class VariationalDenseParams:
    """w = (mu, sigma): two parallel dense sub-layers with their activations."""

    mu: DenseParams
    sigma: DenseParams
    act_mu: str = "identity"
    act_sigma: str = "identity"
    act_out: str = "identity"

    def __post_init__(self):
        _same_shapes(self.mu, self.sigma, "variational dense")

    def parameters(self) -> list[Tensor]:
        return self.mu.parameters() + self.sigma.parameters()


@dataclass
class VariationalConvParams:
    mu: ConvParams
    sigma: ConvParams
    act_mu: str = "identity"
    act_sigma: str = "identity"
    act_out: str = "identity"

    def __post_init__(self):
        _same_shapes(self.mu, self.sigma, "variational conv")
        if (self.mu.stride, self.mu.padding) != (self.sigma.stride, self.sigma.padding):
            raise DimensionError("variational conv: sub-layers use different stride or padding")

    def parameters(self) -> list[Tensor]:
        return self.mu.parameters() + self.sigma.parameters()


@dataclass
class BBBDenseParams:
    mean: DenseParams
    rho: DenseParams
    prior_std: float = 1.0

    def __post_init__(self):
        _same_shapes(self.mean, self.rho, "bbb dense")
        if self.prior_std <= 0:
            raise ConfigError("methods.prior_std", "must be > 0")

    def parameters(self) -> list[Tensor]:
        return self.mean.parameters() + self.rho.parameters()


@dataclass
class BBBConvParams:
    mean: ConvParams
    rho: ConvParams
    prior_std: float = 1.0

    def __post_init__(self):
        _same_shapes(self.mean, self.rho, "bbb conv")
        if self.prior_std <= 0:
            raise ConfigError("methods.prior_std", "must be > 0")

    def parameters(self) -> list[Tensor]:
        return self.mean.parameters() + self.rho.parameters()


@dataclass(frozen=True)
class DropoutConfig:
    rate: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise ConfigError("methods.dropout_rate", f"must lie in [0, 1), got {self.rate}")
