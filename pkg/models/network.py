from dataclasses import dataclass

import numpy as np

from errors import DimensionError, UsageError
from layers import (
    ConvParams,
    DenseParams,
    DropoutConfig,
    bbb_conv_forward,
    bbb_dense_forward,
    bbb_kl_to_prior,
    conv_forward,
    dense_forward,
    dropout_forward,
    variational_conv_forward,
    variational_dense_forward,
)
from layers.init import (
    init_bbb_conv,
    init_bbb_dense,
    init_conv,
    init_dense,
    init_variational_conv,
    init_variational_dense,
)
from tensor import Tensor, activation, as_tensor, matmul, parameter
from .architecture import Architecture, LayerSpec
from .index import EMPTY_INDEX, EpistemicIndex, draw_index
from .methods import MethodConfig


DETERMINISTIC = MethodConfig("deterministic")


def _named(prefix: str, params) -> list[tuple[str, Tensor]]:
    names = ("K", "b") if isinstance(params, ConvParams) else ("W", "b")
    return [(f"{prefix}.{n}", t) for n, t in zip(names, params.parameters())]


def _apply_plain(spec: LayerSpec, params, h: Tensor) -> Tensor:
    if spec.kind == "dense":
        return dense_forward(h, params, spec.activation)
    return conv_forward(h, params, spec.activation)


class Model:
    """F_d(x, m, z): a network whose only randomness is the epistemic index z."""

    no_decay: tuple[str, ...] = ()

    def __init__(self, architecture: Architecture, method: MethodConfig):
        self.architecture = architecture
        self.method = method

    # --- Parameters ---

    def named_parameters(self) -> list[tuple[str, Tensor]]:
        raise NotImplementedError

    def parameters(self) -> list[Tensor]:
        return [t for _, t in self.named_parameters()]

    def regularizer(self) -> Tensor | None:
        return None

    def decay_mask(self) -> list[bool]:
        """False for parameters weight decay must leave alone (aligned with parameters())."""
        return [not any(tag in name for tag in self.no_decay) for name, _ in self.named_parameters()]

    # --- Index ---

    def draw_index(self, rng: np.random.Generator, batch_size: int = 1) -> EpistemicIndex:
        return draw_index(self.method, self.architecture, rng, batch_size)

    def enumerate_indices(self) -> list[EpistemicIndex] | None:
        """Every index of a finite p(z), or None when p(z) is continuous."""
        return None

    def _check_index(self, z: EpistemicIndex, batch: int):
        if z.method != self.method.method:
            raise UsageError(f"index drawn for '{z.method}' passed to a '{self.method.method}' model")

    # --- Forward ---

    def forward(self, x, z: EpistemicIndex) -> Tensor:
        h = as_tensor(x)
        if h.shape[1:] != self.architecture.input_shape:
            raise DimensionError(f"input {h.shape} does not match architecture input {self.architecture.input_shape}")
        self._check_index(z, h.shape[0])
        context = self._begin(z)
        site = 0
        for i, spec in enumerate(self.architecture.layers):
            if spec.kind == "flatten":
                h = h.reshape((h.shape[0], -1))
            elif spec.kind == "activation":
                h = activation(h, spec.activation)
            else:
                h = self._parametric(i, spec, h, z, site, context)
                site += 1
        return h

    def _begin(self, z: EpistemicIndex):
        return None

    def _parametric(self, i: int, spec: LayerSpec, h: Tensor, z: EpistemicIndex, site: int, context) -> Tensor:
        raise NotImplementedError


class DeterministicModel(Model):
    def __init__(
        self,
        architecture: Architecture,
        layers: dict[int, DenseParams | ConvParams],
        method: MethodConfig = DETERMINISTIC,
    ):
        super().__init__(architecture, method)
        self.layers = layers

    def named_parameters(self):
        return [pair for i, p in sorted(self.layers.items()) for pair in _named(f"layer{i}", p)]

    def _check_index(self, z, batch):
        pass

    def _parametric(self, i, spec, h, z, site, context):
        return _apply_plain(spec, self.layers[i], h)


class VariationalModel(Model):
    """Every dense/conv layer is a Variational Layer with α_N set to the layer activation."""

    # decay on the sigma branch shrinks the predictive variance toward zero
    no_decay = (".sigma.",)

    def __init__(self, architecture: Architecture, layers: dict, method: MethodConfig = MethodConfig("vnn")):
        super().__init__(architecture, method)
        self.layers = layers

    def named_parameters(self):
        pairs = []
        for i, p in sorted(self.layers.items()):
            pairs += _named(f"layer{i}.mu", p.mu) + _named(f"layer{i}.sigma", p.sigma)
        return pairs

    def _check_index(self, z, batch):
        super()._check_index(z, batch)
        if len(z.gaussians) != len(self.layers):
            raise UsageError(f"index has {len(z.gaussians)} noise tensors for {len(self.layers)} variational layers")
        if z.batch_size != batch:
            raise UsageError(f"index drawn for batch {z.batch_size}, input batch is {batch}")

    def _parametric(self, i, spec, h, z, site, context):
        if spec.kind == "dense":
            return variational_dense_forward(h, self.layers[i], z.gaussians[site])
        return variational_conv_forward(h, self.layers[i], z.gaussians[site])


class BBBModel(Model):
    no_decay = (".rho.",)

    def __init__(self, architecture: Architecture, layers: dict, method: MethodConfig = MethodConfig("bbb")):
        super().__init__(architecture, method)
        self.layers = layers

    def named_parameters(self):
        pairs = []
        for i, p in sorted(self.layers.items()):
            pairs += _named(f"layer{i}.mean", p.mean) + _named(f"layer{i}.rho", p.rho)
        return pairs

    def kl_to_prior(self) -> Tensor:
        total = None
        for p in self.layers.values():
            kl = bbb_kl_to_prior(p)
            total = kl if total is None else total + kl
        return total

    def regularizer(self):
        return self.kl_to_prior() * self.method.kl_weight

    def _check_index(self, z, batch):
        super()._check_index(z, batch)
        if len(z.gaussians) != 2 * len(self.layers):
            raise UsageError(f"index has {len(z.gaussians)} weight draws for {len(self.layers)} BBB layers")

    def _parametric(self, i, spec, h, z, site, context):
        z_w, z_b = z.gaussians[2 * site], z.gaussians[2 * site + 1]
        if spec.kind == "dense":
            out = bbb_dense_forward(h, self.layers[i], z_w, z_b)
        else:
            out = bbb_conv_forward(h, self.layers[i], z_w, z_b)
        return activation(out, spec.activation)


class DropoutModel(DeterministicModel):
    """MC Dropout: a dropout mask after every hidden layer, kept on at prediction time."""

    def __init__(self, architecture: Architecture, layers: dict, method: MethodConfig = MethodConfig("mcd")):
        super().__init__(architecture, layers, method)
        self.dropout = DropoutConfig(method.dropout_rate)
        self._last = max(layers) if layers else -1

    def _check_index(self, z, batch):
        Model._check_index(self, z, batch)
        if z.mask_seed is None:
            raise UsageError("MC dropout index carries no mask seed")

    def _begin(self, z):
        return np.random.Generator(np.random.Philox(z.mask_seed))

    def _parametric(self, i, spec, h, z, site, context):
        out = _apply_plain(spec, self.layers[i], h)
        if i == self._last:
            return out
        return dropout_forward(out, self.dropout, context)


@dataclass
class HypermodelParams:
    """g(z) = a + B z generating the flat parameter vector of a base network."""

    a: Tensor
    B: Tensor
    layout: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self):
        total = sum(int(np.prod(shape)) for _, shape in self.layout)
        if self.a.shape != (total,) or self.B.data.ndim != 2 or self.B.shape[0] != total:
            raise DimensionError(f"hypermodel: a {self.a.shape}, B {self.B.shape} do not cover {total} parameters")
        if self.B.shape[1] < 1:
            raise DimensionError("hypermodel index dimension must be >= 1")

    @property
    def index_dim(self) -> int:
        return self.B.shape[1]


def hypermodel_materialize(params: HypermodelParams, z) -> list[Tensor]:
    """θ = a + B·z split into the base network's parameter tensors (layout order)."""
    z = as_tensor(z)
    if z.shape != (params.index_dim,):
        raise UsageError(f"hypermodel index has shape {z.shape}, expected ({params.index_dim},)")
    theta = matmul(params.B, z.reshape((params.index_dim, 1))).reshape((params.a.shape[0],)) + params.a
    tensors = []
    offset = 0
    for _, shape in params.layout:
        size = int(np.prod(shape))
        tensors.append(theta[offset:offset + size].reshape(shape))
        offset += size
    return tensors


class HyperModel(Model):
    def __init__(self, architecture: Architecture, params: HypermodelParams, method: MethodConfig):
        super().__init__(architecture, method)
        self.params = params
        self._strides = {}
        for i in architecture.parametric_layers():
            self._strides[i] = (architecture.layers[i].stride, architecture.layers[i].padding)

    def named_parameters(self):
        return [("hyper.a", self.params.a), ("hyper.B", self.params.B)]

    def _check_index(self, z, batch):
        super()._check_index(z, batch)
        if len(z.gaussians) != 1:
            raise UsageError("hypermodel index must hold exactly one z vector")

    def _begin(self, z):
        tensors = hypermodel_materialize(self.params, z.gaussians[0])
        return iter(zip(tensors[0::2], tensors[1::2]))

    def _parametric(self, i, spec, h, z, site, context):
        weight, bias = next(context)
        if spec.kind == "dense":
            return _apply_plain(spec, DenseParams(weight, bias), h)
        stride, padding = self._strides[i]
        return _apply_plain(spec, ConvParams(weight, bias, stride, padding), h)


class EnsembleModel(Model):
    """Categorical p(z) over K independently trained members."""

    def __init__(self, members: list, method: MethodConfig | None = None):
        if not members:
            raise UsageError("an ensemble needs at least one member")
        method = method or MethodConfig("ensemble", ensemble_size=len(members))
        if method.ensemble_size != len(members):
            raise UsageError(f"ensemble_size {method.ensemble_size} but {len(members)} members")
        super().__init__(members[0].architecture, method)
        self.members = list(members)

    def named_parameters(self):
        return [
            (f"member{k}.{name}", t) for k, m in enumerate(self.members) for name, t in m.named_parameters()
        ]

    def enumerate_indices(self):
        return [EpistemicIndex("ensemble", member=k) for k in range(len(self.members))]

    def forward(self, x, z: EpistemicIndex) -> Tensor:
        self._check_index(z, 0)
        if z.member is None or not 0 <= z.member < len(self.members):
            raise UsageError(f"member id {z.member} outside [0, {len(self.members)})")
        return self.members[z.member].forward(x, EMPTY_INDEX)


def forward_indexed(model: Model, x, z: EpistemicIndex) -> Tensor:
    return model.forward(x, z)


# --- Construction ---


def _init_layers(architecture: Architecture, rng: np.random.Generator, make_dense, make_conv) -> dict:
    layers = {}
    for i in architecture.parametric_layers():
        spec = architecture.layers[i]
        fan = architecture.input_of(i)[0]
        if spec.kind == "dense":
            layers[i] = make_dense(fan, spec)
        else:
            layers[i] = make_conv(fan, spec)
    return layers


def init_deterministic(architecture: Architecture, rng: np.random.Generator) -> dict:
    return _init_layers(
        architecture,
        rng,
        lambda fan, s: init_dense(fan, s.units, rng),
        lambda fan, s: init_conv(fan, s.units, s.kernel, s.stride, s.padding, rng),
    )


def init_hypermodel(architecture: Architecture, index_dim: int, rng: np.random.Generator) -> HypermodelParams:
    base = DeterministicModel(architecture, init_deterministic(architecture, rng))
    layout, a_parts, scales = [], [], []
    for name, t in base.named_parameters():
        layout.append((name, t.shape))
        a_parts.append(t.data.reshape(-1))
        # bias rows get a fixed spread, weight rows follow their layer's init scale
        spread = 0.1 if t.data.ndim == 1 else float(np.std(t.data))
        scales.append(np.full(t.size, 0.1 * spread))
    scale = np.concatenate(scales)[:, None] / np.sqrt(index_dim)
    B = rng.standard_normal((scale.shape[0], index_dim)) * scale
    return HypermodelParams(parameter(np.concatenate(a_parts)), parameter(B), tuple(layout))


def build_model(architecture: Architecture, method: MethodConfig, rng: np.random.Generator) -> Model:
    kind = method.method
    if kind == "deterministic":
        return DeterministicModel(architecture, init_deterministic(architecture, rng), method)
    if kind == "mcd":
        return DropoutModel(architecture, init_deterministic(architecture, rng), method)
    if kind == "vnn":
        layers = _init_layers(
            architecture,
            rng,
            lambda fan, s: init_variational_dense(fan, s.units, rng, act_out=s.activation),
            lambda fan, s: init_variational_conv(fan, s.units, s.kernel, s.stride, s.padding, rng, act_out=s.activation),
        )
        return VariationalModel(architecture, layers, method)
    if kind == "bbb":
        layers = _init_layers(
            architecture,
            rng,
            lambda fan, s: init_bbb_dense(fan, s.units, rng, method.prior_std),
            lambda fan, s: init_bbb_conv(fan, s.units, s.kernel, s.stride, s.padding, rng, method.prior_std),
        )
        return BBBModel(architecture, layers, method)
    if kind == "hypermodel":
        return HyperModel(architecture, init_hypermodel(architecture, method.index_dim, rng), method)
    members = [
        DeterministicModel(architecture, init_deterministic(architecture, rng)) for _ in range(method.ensemble_size)
    ]
    return EnsembleModel(members, method)
