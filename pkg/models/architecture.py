from dataclasses import asdict, dataclass, field

import config
from errors import ConfigError, DimensionError
from tensor import ACTIVATIONS, conv_output_size

LAYER_KINDS = ("dense", "conv2d", "flatten", "activation")


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    units: int = 0          # dense width or conv filter count
    kernel: int = 0
    stride: int = 1
    padding: int = 0
    activation: str = "identity"

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ConfigError("architecture.kind", f"unknown layer kind '{self.kind}'")
        if self.activation not in ACTIVATIONS:
            raise ConfigError("architecture.activation", f"unknown activation '{self.activation}'")

    @property
    def parametric(self) -> bool:
        return self.kind in ("dense", "conv2d")


def dense(units: int, activation: str = "identity") -> LayerSpec:
    return LayerSpec("dense", units=units, activation=activation)


def conv(filters: int, kernel: int, stride: int = 1, padding: int = 0, activation: str = "identity") -> LayerSpec:
    return LayerSpec("conv2d", units=filters, kernel=kernel, stride=stride, padding=padding, activation=activation)


FLATTEN = LayerSpec("flatten")


@dataclass(frozen=True)
class Architecture:
    """Ordered layer specs applied to inputs of ``input_shape`` (batch axis excluded)."""

    name: str
    input_shape: tuple[int, ...]
    layers: tuple[LayerSpec, ...]
    shapes: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "input_shape", tuple(self.input_shape))
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "shapes", tuple(self._resolve()))

    def _resolve(self) -> list[tuple[int, ...]]:
        shape = self.input_shape
        shapes = []
        for i, spec in enumerate(self.layers):
            if spec.kind == "dense":
                if len(shape) != 1:
                    raise DimensionError(f"layer {i}: dense expects a flat input, got {shape}")
                shape = (spec.units,)
            elif spec.kind == "conv2d":
                if len(shape) != 3:
                    raise DimensionError(f"layer {i}: conv2d expects [C, H, W], got {shape}")
                c, h, w = shape
                shape = (
                    spec.units,
                    conv_output_size(h, spec.kernel, spec.stride, spec.padding),
                    conv_output_size(w, spec.kernel, spec.stride, spec.padding),
                )
            elif spec.kind == "flatten":
                size = 1
                for d in shape:
                    size *= d
                shape = (size,)
            shapes.append(shape)
        return shapes

    def input_of(self, index: int) -> tuple[int, ...]:
        return self.input_shape if index == 0 else self.shapes[index - 1]

    @property
    def output_shape(self) -> tuple[int, ...]:
        return self.shapes[-1] if self.shapes else self.input_shape

    def parametric_layers(self) -> list[int]:
        return [i for i, spec in enumerate(self.layers) if spec.parametric]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "input_shape": list(self.input_shape),
            "layers": [asdict(spec) for spec in self.layers],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Architecture":
        return cls(data["name"], tuple(data["input_shape"]), tuple(LayerSpec(**s) for s in data["layers"]))


def _cnn(name: str, channels: tuple[int, int, int], input_shape, classes: int, act: str) -> Architecture:
    c1, c2, c3 = channels
    return Architecture(
        name,
        input_shape,
        (
            conv(c1, kernel=4, stride=2, padding=1, activation=act),
            conv(c2, kernel=4, stride=2, padding=1, activation=act),
            conv(c3, kernel=3, stride=2, padding=1, activation=act),
            FLATTEN,
            dense(classes),
        ),
    )


CNN_CHANNELS = {
    "base": (32, 64, 64),
    "mini": (16, 32, 32),
    "micro": (8, 16, 16),
}
PRESETS = ("regression-mlp", "mlp", *CNN_CHANNELS)


def preset(
    name: str,
    input_shape: tuple[int, ...] = (1, 28, 28),
    output_dim: int = 10,
    activation: str = "relu",
) -> Architecture:
    """Named architectures: the regression MLP of the oracle benchmark and the MNIST set."""
    if name == "regression-mlp":
        width = config.HIDDEN_WIDTH
        hidden = (dense(width, activation) for _ in range(config.NNGP_DEPTH))
        return Architecture(name, input_shape, (*hidden, dense(output_dim)))
    if name == "mlp":
        flat = () if len(input_shape) == 1 else (FLATTEN,)
        return Architecture(
            name, input_shape, (*flat, dense(256, activation), dense(128, activation), dense(output_dim))
        )
    if name in CNN_CHANNELS:
        return _cnn(name, CNN_CHANNELS[name], input_shape, output_dim, activation)
    raise ConfigError("classify.architectures", f"unknown architecture '{name}', expected one of {PRESETS}")
