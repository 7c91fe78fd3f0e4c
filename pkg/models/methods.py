from dataclasses import dataclass

import config
from errors import ConfigError

METHODS = ("vnn", "bbb", "mcd", "ensemble", "hypermodel", "deterministic")

# hyperparameters each method reads; the rest stay at their defaults
RELEVANT_FIELDS = {
    "vnn": (),
    "bbb": ("prior_std", "kl_weight"),
    "mcd": ("dropout_rate",),
    "ensemble": ("ensemble_size",),
    "hypermodel": ("index_dim",),
    "deterministic": (),
}


@dataclass(frozen=True)
class MethodConfig:
    method: str
    dropout_rate: float = config.DROPOUT_RATE
    prior_std: float = config.PRIOR_STD
    kl_weight: float = config.KL_WEIGHT
    ensemble_size: int = config.ENSEMBLE_SIZE
    index_dim: int = config.INDEX_DIM

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError("methods.names", f"unknown method '{self.method}', expected one of {METHODS}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError("methods.dropout_rate", f"must lie in [0, 1), got {self.dropout_rate}")
        if self.prior_std <= 0:
            raise ConfigError("methods.prior_std", "must be > 0")
        if self.kl_weight < 0:
            raise ConfigError("methods.kl_weight", "must be >= 0")
        if self.ensemble_size < 1:
            raise ConfigError("methods.ensemble_size", "must be >= 1")
        if self.index_dim < 1:
            raise ConfigError("methods.index_dim", "must be >= 1")

    @property
    def method_id(self) -> str:
        if self.method == "ensemble":
            return f"ensemble-{self.ensemble_size}"
        return self.method

    def to_dict(self) -> dict:
        data = {"method": self.method}
        for name in RELEVANT_FIELDS[self.method]:
            data[name] = getattr(self, name)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "MethodConfig":
        return cls(**data)
